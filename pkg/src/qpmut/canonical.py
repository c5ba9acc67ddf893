"""Canonical labeling and automorphisms of small quivers.

The canonical form covers the quiver and, optionally, an integer arrow
grading.  Potentials are deliberately excluded: the workflows that compare
QPs up to isomorphism (mutation-class search, round-trip checks, census
deduplication) track potentials only up to right equivalence, where
coefficients drift, so structural identity lives in the labeled quiver alone.

The algorithm is the usual individualization/refinement scheme: iterated
degree refinement splits the vertices into canonically ordered color classes;
whenever a class stays ambiguous, each of its vertices is individualized in
turn and the search recurses, keeping the lexicographically least arrow
encoding over all complete orderings.  Vertex count is guarded (<= 12), which
keeps the worst symmetric case (an unrefinable cycle) at a handful of leaves.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import Arrow, Quiver
from .errors import CapacityError, InternalInvariantError

MAX_VERTICES = 12

_Label = tuple[int, int]


def _label(degrees: dict[str, int] | None, name: str) -> _Label:
    # Sortable encoding of an optional degree label.
    if degrees is None:
        return (0, 0)
    return (1, degrees[name])


def _refine(quiver: Quiver, degrees: dict[str, int] | None, colors: dict[int, int]) -> dict[int, int]:
    while True:
        sigs = {}
        for v in quiver.vertices:
            inc = []
            for a in quiver.arrows_from(v):
                inc.append((0, _label(degrees, a.name), colors[a.tgt]))
            for a in quiver.arrows_to(v):
                inc.append((1, _label(degrees, a.name), colors[a.src]))
            sigs[v] = (colors[v], tuple(sorted(inc)))
        ranking = {sig: i for i, sig in enumerate(sorted(set(sigs.values())))}
        new = {v: ranking[sigs[v]] for v in quiver.vertices}
        if new == colors:
            return colors
        colors = new


def _classes(colors: dict[int, int]) -> list[list[int]]:
    by_color: dict[int, list[int]] = {}
    for v, c in colors.items():
        by_color.setdefault(c, []).append(v)
    return [sorted(by_color[c]) for c in sorted(by_color)]


def _arrow_key(quiver: Quiver, degrees: dict[str, int] | None, pi: dict[int, int]):
    return tuple(sorted((pi[a.src], pi[a.tgt], _label(degrees, a.name)) for a in quiver.arrows))


@dataclass(frozen=True)
class CanonicalForm:
    """Canonically labeled copy of a quiver plus the relabeling witness.

    ``key`` is hashable and equal for two inputs exactly when they are
    isomorphic as (graded) quivers.  ``vertex_map`` sends original vertices to
    canonical ones (1..n); ``arrow_map`` sends original arrow names to the
    canonical names ``a0, a1, ...`` (ties between indistinguishable parallel
    arrows are broken by original name, which affects only the witness, never
    the key).
    """

    key: tuple
    quiver: Quiver
    degrees: dict[str, int] | None
    vertex_map: dict[int, int]
    arrow_map: dict[str, str]


def _search_orderings(quiver: Quiver, degrees: dict[str, int] | None):
    """Yield nothing; return (best_key, [orderings attaining it])."""
    base = {v: 0 for v in quiver.vertices}
    base = _refine(quiver, degrees, base)
    best: list = [None, []]  # best key, list of pi dicts

    def rec(colors: dict[int, int]) -> None:
        classes = _classes(colors)
        multi = next((cl for cl in classes if len(cl) > 1), None)
        if multi is None:
            order = [cl[0] for cl in classes]
            pi = {v: i + 1 for i, v in enumerate(order)}
            key = _arrow_key(quiver, degrees, pi)
            if best[0] is None or key < best[0]:
                best[0] = key
                best[1] = [pi]
            elif key == best[0]:
                best[1].append(pi)
            return
        for v in multi:
            # Individualize v ahead of its class, then re-refine.
            split = {u: (colors[u], 0 if u == v else 1) for u in quiver.vertices}
            ranking = {sig: i for i, sig in enumerate(sorted(set(split.values())))}
            rec(_refine(quiver, degrees, {u: ranking[split[u]] for u in quiver.vertices}))

    rec(base)
    return best[0], best[1]


def canonical_form(quiver: Quiver, degrees: dict[str, int] | None = None) -> CanonicalForm:
    """Canonical form of a quiver, optionally together with its grading."""
    n = len(quiver.vertices)
    if n > MAX_VERTICES:
        raise CapacityError(
            f"canonical form supports at most {MAX_VERTICES} vertices, got {n}"
        )
    if degrees is not None:
        degrees = {a.name: int(degrees[a.name]) for a in quiver.arrows}
    arrow_key, orderings = _search_orderings(quiver, degrees)
    if not orderings:
        raise InternalInvariantError("canonical search produced no ordering")
    pi = orderings[0]
    sorted_arrows = sorted(
        quiver.arrows, key=lambda a: (pi[a.src], pi[a.tgt], _label(degrees, a.name), a.name)
    )
    arrow_map = {a.name: f"a{i}" for i, a in enumerate(sorted_arrows)}
    new_arrows = [Arrow(arrow_map[a.name], pi[a.src], pi[a.tgt]) for a in sorted_arrows]
    new_degrees = (
        {arrow_map[a.name]: degrees[a.name] for a in sorted_arrows} if degrees is not None else None
    )
    key = (n, degrees is not None, arrow_key)
    return CanonicalForm(
        key=key,
        quiver=Quiver(range(1, n + 1), new_arrows),
        degrees=new_degrees,
        vertex_map=dict(pi),
        arrow_map=arrow_map,
    )


def canonical_key(quiver: Quiver, degrees: dict[str, int] | None = None) -> tuple:
    return canonical_form(quiver, degrees).key


MAX_AUTOMORPHISMS = 100_000


def quiver_automorphisms(
    quiver: Quiver, degrees: dict[str, int] | None = None
) -> list[tuple[dict[int, int], dict[str, str]]]:
    """All automorphisms as (vertex map, arrow map) pairs.

    The vertex part permutes vertices preserving arrow multiplicities (and
    degrees when given); the arrow part refines it by choosing, for every
    bundle of indistinguishable parallel arrows, one of the possible
    bijections.  The identity is always first.
    """
    n = len(quiver.vertices)
    if n > MAX_VERTICES:
        raise CapacityError(
            f"automorphism search supports at most {MAX_VERTICES} vertices, got {n}"
        )
    if degrees is not None:
        degrees = {a.name: int(degrees[a.name]) for a in quiver.arrows}
    _, orderings = _search_orderings(quiver, degrees)
    pi0 = orderings[0]
    inv0 = {pos: v for v, pos in pi0.items()}
    vertex_autos = []
    seen = set()
    for pi in orderings:
        sigma = {v: inv0[pi[v]] for v in quiver.vertices}
        key = tuple(sorted(sigma.items()))
        if key in seen:
            continue
        seen.add(key)
        vertex_autos.append(sigma)
    # Identity first, then deterministic order.
    vertex_autos.sort(key=lambda s: tuple(s[v] for v in quiver.vertices))
    identity = {v: v for v in quiver.vertices}
    if identity in vertex_autos:
        vertex_autos.remove(identity)
    vertex_autos.insert(0, identity)

    result: list[tuple[dict[int, int], dict[str, str]]] = []
    for sigma in vertex_autos:
        # Bucket arrows by (src, tgt, label); sigma must map buckets to buckets.
        buckets: dict[tuple, list[str]] = {}
        for a in quiver.arrows:
            buckets.setdefault((a.src, a.tgt, _label(degrees, a.name)), []).append(a.name)
        ok = True
        bucket_maps = []
        for (src, tgt, lab), names in sorted(buckets.items()):
            image = buckets.get((sigma[src], sigma[tgt], lab), [])
            if len(image) != len(names):
                ok = False
                break
            bucket_maps.append((sorted(names), sorted(image)))
        if not ok:
            continue
        per_bucket = []
        for names, image in bucket_maps:
            per_bucket.append([dict(zip(names, perm)) for perm in itertools.permutations(image)])
        count = 1
        for options in per_bucket:
            count *= len(options)
            if count > MAX_AUTOMORPHISMS:
                raise CapacityError("too many arrow-level automorphisms to enumerate")
        for combo in itertools.product(*per_bucket):
            arrow_map: dict[str, str] = {}
            for part in combo:
                arrow_map.update(part)
            result.append((dict(sigma), arrow_map))
    if len(result) > MAX_AUTOMORPHISMS:
        raise CapacityError("too many automorphisms to enumerate")
    return result
