"""Structural analysis of quiver shapes.

Everything here is pure combinatorics on the underlying directed or
undirected multigraph: connectivity, oriented triangles, simple cycles,
single-cycle/tree detection, the structural membership test for the
triangle-tiled class reachable from a linear quiver ("MA" below), and cycle
decompositions for the class reachable from an acyclic cycle quiver
("MAtilde").  No potentials or degrees appear; callers layer those on top.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .core import Potential, Quiver


def connected_components(quiver: Quiver) -> list[set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in quiver.vertices}
    for a in quiver.arrows:
        adj[a.src].add(a.tgt)
        adj[a.tgt].add(a.src)
    seen: set[int] = set()
    comps = []
    for v in quiver.vertices:
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(comp)
    return comps


def is_connected(quiver: Quiver) -> bool:
    return len(connected_components(quiver)) <= 1


def is_tree(quiver: Quiver) -> bool:
    """Connected with exactly |vertices|-1 arrows (hence simple and acyclic)."""
    return is_connected(quiver) and len(quiver.arrows) == len(quiver.vertices) - 1


def has_loop(quiver: Quiver) -> bool:
    return any(a.src == a.tgt for a in quiver.arrows)


def two_cycle_pairs(quiver: Quiver) -> list[tuple[str, str]]:
    """All antiparallel pairs (a, b) with a: u->v, b: v->u, u != v."""
    pairs = []
    for a in quiver.arrows:
        for b in quiver.arrows_from(a.tgt):
            if b.tgt == a.src and a.src != a.tgt and a.name < b.name:
                pairs.append((a.name, b.name))
    return pairs


def oriented_triangles(quiver: Quiver) -> list[tuple[str, str, str]]:
    """All oriented 3-cycles on three distinct vertices, as arrow name triples
    in traversal order, rotated to start at the least name, sorted."""
    found: set[tuple[str, str, str]] = set()
    for x in quiver.arrows:
        for y in quiver.arrows_from(x.tgt):
            if y.tgt in (x.src, x.tgt):
                continue
            for z in quiver.arrows_from(y.tgt):
                if z.tgt != x.src:
                    continue
                names = (x.name, y.name, z.name)
                k = min(range(3), key=lambda i: names[i])
                found.add(names[k:] + names[:k])
    return sorted(found)


def triangle_potential(quiver: Quiver) -> Potential:
    """The potential with one coefficient-1 term per oriented 3-cycle."""
    return Potential([(1, tri) for tri in oriented_triangles(quiver)])


Traversal = list[tuple[str, bool]]
"""A walk along underlying edges: (arrow name, True if traversed src->tgt)."""


def underlying_simple_cycles(quiver: Quiver) -> list[Traversal]:
    """Vertex-simple cycles of the underlying multigraph, length >= 2.

    Each cycle is returned once (up to rotation and reflection) as a traversal
    starting at its least vertex.  Loops are never part of a simple cycle
    here; a pair of distinct arrows between the same two vertices counts as a
    length-2 cycle whatever the two directions are.
    """
    incidence: dict[int, list[tuple[str, int, bool]]] = {v: [] for v in quiver.vertices}
    for a in quiver.arrows:
        if a.src == a.tgt:
            continue
        incidence[a.src].append((a.name, a.tgt, True))
        incidence[a.tgt].append((a.name, a.src, False))
    for v in incidence:
        incidence[v].sort()
    cycles: dict[frozenset, Traversal] = {}

    def dfs(start: int, at: int, on_path: set[int], used: set[str], trav: Traversal) -> None:
        for name, other, fwd in incidence[at]:
            if name in used:
                continue
            if other == start and len(trav) >= 1:
                key = frozenset(used | {name})
                if key not in cycles:
                    cycles[key] = trav + [(name, fwd)]
            elif other not in on_path and other > start:
                on_path.add(other)
                used.add(name)
                dfs(start, other, on_path, used, trav + [(name, fwd)])
                on_path.remove(other)
                used.remove(name)

    for start in quiver.vertices:
        dfs(start, start, {start}, set(), [])
    return [cycles[k] for k in sorted(cycles, key=lambda fs: sorted(fs))]


def is_oriented_traversal(trav: Traversal) -> bool:
    flags = {fwd for _, fwd in trav}
    return len(flags) == 1


def single_cycle_traversal(quiver: Quiver) -> Traversal | None:
    """If the whole underlying multigraph is one simple cycle, its traversal.

    Requires: connected, no loops, every vertex of valency exactly 2, and as
    many arrows as vertices (>= 2).  Returns None when the shape differs.
    The traversal starts at the least vertex along its least-named incident
    arrow, making the result deterministic.
    """
    n = len(quiver.vertices)
    if n < 2 or len(quiver.arrows) != n or has_loop(quiver) or not is_connected(quiver):
        return None
    if any(quiver.valency(v) != 2 for v in quiver.vertices):
        return None
    start = quiver.vertices[0]
    incident = sorted(
        [(a.name, a.tgt, True) for a in quiver.arrows_from(start)]
        + [(a.name, a.src, False) for a in quiver.arrows_to(start)]
    )
    trav: Traversal = []
    used: set[str] = set()
    at = start
    name, other, fwd = incident[0]
    while True:
        trav.append((name, fwd))
        used.add(name)
        at = other
        if at == start and len(trav) == n:
            return trav
        nxt = [
            (a.name, a.tgt, True) for a in quiver.arrows_from(at) if a.name not in used
        ] + [(a.name, a.src, False) for a in quiver.arrows_to(at) if a.name not in used]
        if len(nxt) != 1:
            return None
        name, other, fwd = sorted(nxt)[0]


@dataclass(frozen=True)
class MAVerdict:
    member: bool
    reason: str | None = None


def ma_structural(quiver: Quiver) -> MAVerdict:
    """Structural membership test for the triangle-tiled class MA.

    A member is a connected quiver in which every simple cycle of the
    underlying multigraph is an oriented 3-cycle, valencies stay <= 4, a
    valency-4 vertex has its four arrows split two-and-two between two
    distinct 3-cycles, and a valency-3 vertex has exactly two of its arrows in
    one 3-cycle and the third in none.  (Connectedness is part of the test:
    the class is generated by mutation from a connected quiver.)
    """
    if len(quiver.vertices) == 0:
        return MAVerdict(False, "empty quiver")
    if has_loop(quiver):
        return MAVerdict(False, "has a loop")
    if not is_connected(quiver):
        return MAVerdict(False, "not connected")
    for trav in underlying_simple_cycles(quiver):
        if len(trav) != 3 or not is_oriented_traversal(trav):
            names = ",".join(name for name, _ in trav)
            return MAVerdict(False, f"cycle ({names}) is not an oriented 3-cycle")
    triangles = oriented_triangles(quiver)
    in_triangles: dict[str, list[tuple[str, str, str]]] = {}
    for tri in triangles:
        for name in tri:
            in_triangles.setdefault(name, []).append(tri)
    for name, tris in in_triangles.items():
        if len(tris) > 1:
            return MAVerdict(False, f"arrow {name!r} lies in two 3-cycles")
    for v in quiver.vertices:
        val = quiver.valency(v)
        if val > 4:
            return MAVerdict(False, f"vertex {v} has valency {val} > 4")
        incident = [a.name for a in quiver.arrows_at(v)]
        tri_of = {name: in_triangles.get(name, [None])[0] for name in incident}
        tris_here = [t for t in tri_of.values() if t is not None]
        if val == 4:
            distinct = set(tris_here)
            if len(tris_here) != 4 or len(distinct) != 2:
                return MAVerdict(
                    False, f"valency-4 vertex {v} is not covered by two 3-cycles"
                )
            for tri in distinct:
                if sum(1 for t in tris_here if t == tri) != 2:
                    return MAVerdict(
                        False, f"valency-4 vertex {v} is not split 2+2 between 3-cycles"
                    )
        elif val == 3:
            distinct = set(tris_here)
            if len(tris_here) != 2 or len(distinct) != 1:
                return MAVerdict(
                    False,
                    f"valency-3 vertex {v} must have exactly two arrows in one 3-cycle",
                )
    return MAVerdict(True)


@dataclass(frozen=True)
class CycleDecomposition:
    """A reading of a quiver as: one non-oriented full cycle, a triangle
    optionally anchored on each cycle arrow through a fresh connecting vertex,
    and MA-class branches hanging at the connecting vertices.

    ``cycle`` is the traversal of the central cycle; ``anchors`` maps a cycle
    arrow to (first triangle arrow, second triangle arrow, connecting vertex);
    ``branches`` maps a cycle arrow to the sorted vertex tuple of its branch.
    ``arm_totals`` gives (forward total, backward total): cycle arrows of each
    traversal direction plus the vertex counts of the branches they carry.
    """

    cycle: tuple[tuple[str, bool], ...]
    anchors: dict[str, tuple[str, str, int]]
    branches: dict[str, tuple[int, ...]]
    arm_totals: tuple[int, int]


def matilde_decompositions(quiver: Quiver) -> list[CycleDecomposition]:
    """All valid cycle decompositions of the quiver (possibly none or many)."""
    out: list[CycleDecomposition] = []
    if has_loop(quiver) or not is_connected(quiver):
        return out
    all_arrows = {a.name for a in quiver.arrows}
    for trav in underlying_simple_cycles(quiver):
        if is_oriented_traversal(trav):
            continue
        cycle_names = [name for name, _ in trav]
        cycle_set = set(cycle_names)
        cycle_vertices: set[int] = set()
        for name in cycle_names:
            a = quiver.arrow(name)
            cycle_vertices.add(a.src)
            cycle_vertices.add(a.tgt)
        induced = quiver.induced(cycle_vertices)
        if {a.name for a in induced.arrows} != cycle_set:
            continue
        outside = [v for v in quiver.vertices if v not in cycle_vertices]
        rest = quiver.induced(outside)
        comps = connected_components(rest) if outside else []
        comp_of: dict[int, int] = {}
        for i, comp in enumerate(comps):
            for v in comp:
                comp_of[v] = i
        # Anchor candidates per cycle arrow.  A cycle arrow may anchor one
        # triangle through a connecting vertex outside the cycle, or none;
        # with parallel cycle arrows the assignment is a genuine choice, so
        # all assignments are tried and each valid one is reported.
        candidate_lists: list[list[tuple[str, str, int] | None]] = []
        for name in cycle_names:
            alpha = quiver.arrow(name)
            candidates: list[tuple[str, str, int] | None] = [None]
            for ap in quiver.arrows_from(alpha.tgt):
                if ap.tgt in cycle_vertices:
                    continue
                for app in quiver.arrows_from(ap.tgt):
                    if app.tgt == alpha.src:
                        candidates.append((ap.name, app.name, ap.tgt))
            candidate_lists.append(candidates)
        for assignment in itertools.product(*candidate_lists):
            anchors = {
                cycle_names[i]: choice
                for i, choice in enumerate(assignment)
                if choice is not None
            }
            connecting = [u for _, _, u in anchors.values()]
            if len(set(connecting)) != len(connecting):
                continue
            used_comps: dict[int, str] = {}
            branches: dict[str, tuple[int, ...]] = {}
            ok = True
            for name, (_, _, u) in anchors.items():
                ci = comp_of[u]
                if ci in used_comps:
                    ok = False
                    break
                used_comps[ci] = name
                branches[name] = tuple(sorted(comps[ci]))
            if not ok or len(used_comps) != len(comps):
                continue
            # Every arrow must be a cycle arrow, an anchored triangle arrow,
            # or a branch-internal arrow.
            accounted = set(cycle_set)
            for name, (ap, app, _) in anchors.items():
                accounted.add(ap)
                accounted.add(app)
            for comp in comps:
                for a in quiver.induced(comp).arrows:
                    accounted.add(a.name)
            if accounted != all_arrows:
                continue
            if any(not ma_structural(quiver.induced(set(comp))).member for comp in comps):
                continue
            fwd_total = 0
            bwd_total = 0
            for name, fwd in trav:
                extra = len(branches.get(name, ()))
                if fwd:
                    fwd_total += 1 + extra
                else:
                    bwd_total += 1 + extra
            out.append(
                CycleDecomposition(
                    cycle=tuple(trav),
                    anchors=anchors,
                    branches=branches,
                    arm_totals=(fwd_total, bwd_total),
                )
            )
    return out


def anchored_potential_terms(quiver: Quiver, dec: CycleDecomposition) -> list[tuple[str, str, str]]:
    """The potential words a cycle decomposition induces: one 3-cycle per
    anchored triangle (cycle arrow, then its two triangle arrows) plus every
    oriented 3-cycle inside the branches (where no arrow lies in two
    3-cycles, so the triangle sum is unambiguous)."""
    words: list[tuple[str, str, str]] = []
    for name, (ap, app, _) in sorted(dec.anchors.items()):
        tri = (name, ap, app)
        k = min(range(3), key=lambda i: tri[i])
        words.append(tri[k:] + tri[:k])
    for comp in dec.branches.values():
        words.extend(oriented_triangles(quiver.induced(set(comp))))
    return sorted(set(words))


def matilde_potential(quiver: Quiver) -> Potential | None:
    """The class potential read off the first cycle decomposition, or the
    plain triangle sum when the quiver has no central cycle (MA members,
    acyclic quivers).  None when the quiver decomposes in no way at all and
    still has a non-oriented cycle somewhere (outside both classes).

    Distinct decompositions of the same quiver induce potentials that differ
    only by an automorphism of the quiver (the anchored triangles get traded
    between parallel cycle arrows), so picking the first is a sound and
    deterministic convention.
    """
    decs = matilde_decompositions(quiver)
    if decs:
        return Potential([(1, w) for w in anchored_potential_terms(quiver, decs[0])])
    if any(
        not is_oriented_traversal(trav) for trav in underlying_simple_cycles(quiver)
    ):
        return None
    return triangle_potential(quiver)
