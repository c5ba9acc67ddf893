"""Membership tests and the full classification census.

Two mutation classes are decided here, each by two independent routes that
must agree:

* the triangle-tiled class reachable from a linear quiver ("MA"): a
  structural description (all cycles are oriented 3-cycles, valency bounds,
  how triangles meet) versus breadth-first search of the actual mutation
  class;
* the cycle class reachable from an acyclic one-cycle quiver ("MAtilde"):
  the cycle-decomposition description versus breadth-first search.

:func:`classify` enumerates, for given arm lengths (p, q), every quiver of
the class, every W-grading of its class potential up to isomorphism, and
every invariant of the resulting degree-zero algebras, cross-checking the
two weight routes, the global-dimension bound, and the closed-form Coxeter
polynomial on each one.  The result is a deterministic JSON-able report that
can be pinned to disk; re-pinning fails loudly if the content ever drifts.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from pathlib import Path

from .algebra import coxeter_polynomial, degree_zero_part, global_dimension
from .canonical import canonical_key
from .core import GradedQP, Potential, Quiver, check_w_grading
from .errors import (
    CapacityError,
    DriftError,
    InternalInvariantError,
    PreconditionError,
)
from .interchange import pretty_json, quiver_to_doc
from .invariants import (
    atilde_coxeter_coefficients,
    derived_class_count,
    weight_structural,
    weight_via_mutation,
)
from .mutation import MutationClass, mutation_class
from .presets import cycle_quiver, linear_quiver
from .shape import (
    CycleDecomposition,
    MAVerdict,
    ma_structural,
    matilde_decompositions,
    matilde_potential,
)

MAX_CLASSIFY_VERTICES = 12


@lru_cache(maxsize=None)
def _ma_class_keys(n: int) -> frozenset:
    return frozenset(mutation_class(linear_quiver(n)).keys())


@lru_cache(maxsize=None)
def _matilde_class_keys(p: int, q: int) -> frozenset:
    return frozenset(mutation_class(cycle_quiver(p, q)).keys())


def is_in_ma(quiver: Quiver, cross_validate: bool = False) -> MAVerdict:
    """Membership in the triangle-tiled class on this vertex count.

    The structural verdict is authoritative; with ``cross_validate`` the
    breadth-first mutation class of the linear quiver is computed too and a
    disagreement raises :class:`InternalInvariantError`.
    """
    verdict = ma_structural(quiver)
    if cross_validate:
        n = len(quiver.vertices)
        if n == 0:
            return verdict
        searched = canonical_key(quiver) in _ma_class_keys(n)
        if searched != verdict.member:
            raise InternalInvariantError(
                "structural MA test and mutation search disagree: "
                f"structural={verdict.member} search={searched}"
            )
    return verdict


@dataclass(frozen=True)
class MatildeVerdict:
    """Membership verdict for the cycle class with arm totals (p, q)."""

    member: bool
    reason: str | None = None
    decomposition: CycleDecomposition | None = field(default=None, compare=False)
    potential: Potential | None = field(default=None, compare=False)


def is_in_matilde(quiver: Quiver, p: int, q: int) -> MatildeVerdict:
    """Membership in the cycle class with arm totals (p, q).

    Decided twice: structurally (a cycle decomposition with these arm
    totals) and by searching the mutation class of the acyclic cycle quiver;
    the two must agree.  A positive verdict carries the first matching
    decomposition and the class potential it induces.
    """
    if not (p >= q >= 1):
        raise PreconditionError("arm lengths need p >= q >= 1")
    reason = None
    matching: CycleDecomposition | None = None
    if len(quiver.vertices) != p + q:
        reason = (
            f"vertex count {len(quiver.vertices)} differs from p+q={p + q}"
        )
        structural = False
    else:
        decs = matilde_decompositions(quiver)
        for dec in decs:
            hi, lo = max(dec.arm_totals), min(dec.arm_totals)
            if (hi, lo) == (p, q):
                matching = dec
                break
        structural = matching is not None
        if not structural:
            reason = (
                "no cycle decomposition with these arm totals"
                if not decs
                else "cycle decompositions exist but with different arm totals"
            )
        searched = canonical_key(quiver) in _matilde_class_keys(p, q)
        if searched != structural:
            raise InternalInvariantError(
                "structural cycle-class test and mutation search disagree: "
                f"structural={structural} search={searched}"
            )
    if not structural:
        return MatildeVerdict(False, reason=reason)
    return MatildeVerdict(
        True,
        decomposition=matching,
        potential=matilde_potential(quiver),
    )


def enumerate_w_gradings(
    quiver: Quiver,
    potential: Potential | None = None,
    up_to_iso: bool = True,
) -> list[dict[str, int]]:
    """All W-gradings of (quiver, potential), each as an arrow-degree map.

    The potential defaults to the quiver's class potential.  Every term must
    be a 3-cycle and no arrow may lie in two terms (true throughout both
    classes); then the W-gradings are exactly the maps putting degree 1 on
    one arrow of each term and 0 elsewhere, and each candidate is verified
    before being returned.  With ``up_to_iso`` the list keeps one grading per
    isomorphism class of the graded quiver.
    """
    if potential is None:
        potential = matilde_potential(quiver)
        if potential is None:
            raise PreconditionError(
                "no class potential for this quiver shape; pass one explicitly"
            )
    words = [w.arrows for _, w in potential.terms]
    seen_arrows: dict[str, tuple[str, ...]] = {}
    for word in words:
        if len(word) != 3:
            raise InternalInvariantError(
                f"potential term {'.'.join(word)} is not a 3-cycle; "
                "the one-arrow-per-term enumeration does not apply"
            )
        for name in word:
            if name in seen_arrows:
                raise InternalInvariantError(
                    f"arrow {name!r} lies in two potential terms; "
                    "the one-arrow-per-term enumeration does not apply"
                )
            seen_arrows[name] = word
    zero = {a.name: 0 for a in quiver.arrows}
    out: list[dict[str, int]] = []
    seen_keys: set[tuple] = set()
    for picks in itertools.product(*(range(3) for _ in words)):
        degrees = dict(zero)
        for word, k in zip(words, picks):
            degrees[word[k]] = 1
        check = check_w_grading(GradedQP(quiver, potential, degrees))
        if not check.ok:
            raise InternalInvariantError(
                f"one-per-term candidate failed the W-grading check: {check.reason}"
            )
        if up_to_iso:
            key = canonical_key(quiver, degrees)
            if key in seen_keys:
                continue
            seen_keys.add(key)
        out.append(degrees)
    out.sort(key=lambda d: sorted(n for n, v in d.items() if v == 1))
    return out


@dataclass(frozen=True)
class ClassificationReport:
    """The census for arm lengths (p, q): quivers, gradings, invariants.

    ``doc`` is the deterministic JSON-able report; convenience properties
    expose the headline counts.
    """

    p: int
    q: int
    doc: dict

    @property
    def quiver_count(self) -> int:
        return len(self.doc["quivers"])

    @property
    def algebra_count(self) -> int:
        return len(self.doc["algebras"])

    @property
    def class_sizes(self) -> dict[int, int]:
        return {c["canonicalWeight"]: c["size"] for c in self.doc["classes"]}


def classify(p: int, q: int) -> ClassificationReport:
    """Classify every W-graded QP of the cycle class with arm totals (p, q).

    Walks the mutation class, rebuilds each representative's class potential,
    enumerates its W-gradings up to isomorphism, and for each one computes
    the weight by both routes, the degree-zero algebra, its global dimension,
    and its Coxeter polynomial — asserting on the spot that the two weights
    agree, that the global dimension is at most 2, that the Coxeter
    polynomial matches its closed form, and finally that the number of
    distinct canonical weights matches the predicted derived-class count.
    """
    if not (p >= q >= 1):
        raise PreconditionError("arm lengths need p >= q >= 1")
    if p + q > MAX_CLASSIFY_VERTICES:
        raise CapacityError(
            f"classification supports p+q <= {MAX_CLASSIFY_VERTICES}, got {p + q}"
        )
    mc: MutationClass = mutation_class(cycle_quiver(p, q))
    quiver_rows: list[dict] = []
    algebra_rows: list[dict] = []
    for index, member in enumerate(mc.members):
        quiver = member.quiver
        potential = matilde_potential(quiver)
        if potential is None:
            raise InternalInvariantError(
                "a mutation-class member admits no class potential"
            )
        gradings = enumerate_w_gradings(quiver, potential, up_to_iso=True)
        quiver_rows.append(
            {
                "index": index,
                "quiver": quiver_to_doc(quiver),
                "potential": [list(w.arrows) for _, w in potential.terms],
                "mutationWitness": list(member.witness),
                "gradingCount": len(gradings),
            }
        )
        for degrees in gradings:
            qp = GradedQP(quiver, potential, degrees, homogeneous=True)
            ws = weight_structural(qp)
            wm = weight_via_mutation(qp)
            if (ws.p, ws.q, ws.canonical) != (wm.p, wm.q, wm.canonical):
                raise InternalInvariantError(
                    "the two weight routes disagree: structural "
                    f"(p={ws.p}, q={ws.q}, w={ws.canonical}) vs mutation "
                    f"(p={wm.p}, q={wm.q}, w={wm.canonical})"
                )
            if p != q and ws.weight != wm.weight:
                raise InternalInvariantError(
                    f"signed weights disagree: {ws.weight} vs {wm.weight}"
                )
            if (ws.p, ws.q) != (p, q):
                raise InternalInvariantError(
                    f"arm totals (p={ws.p}, q={ws.q}) differ from the seed's "
                    f"(p={p}, q={q})"
                )
            algebra = degree_zero_part(qp)
            gldim = global_dimension(algebra)
            if not gldim <= 2:
                raise InternalInvariantError(
                    f"degree-zero algebra has global dimension {gldim} > 2"
                )
            coxeter = coxeter_polynomial(algebra)
            expected = atilde_coxeter_coefficients(p, q, ws.weight)
            if coxeter != expected:
                raise InternalInvariantError(
                    f"Coxeter polynomial {list(coxeter)} differs from the "
                    f"closed form {list(expected)} for weight {ws.weight}"
                )
            algebra_rows.append(
                {
                    "quiverIndex": index,
                    "quiver": quiver_to_doc(quiver, degrees),
                    "degrees": dict(sorted(degrees.items())),
                    "weight": ws.weight,
                    "canonicalWeight": ws.canonical,
                    "gldim": int(gldim),
                    "coxeter": list(coxeter),
                }
            )
    sizes: dict[int, int] = {}
    for row in algebra_rows:
        sizes[row["canonicalWeight"]] = sizes.get(row["canonicalWeight"], 0) + 1
    classes = [
        {"canonicalWeight": w, "size": sizes[w]} for w in sorted(sizes)
    ]
    expected_classes = derived_class_count(p, q)
    if len(classes) != expected_classes:
        raise InternalInvariantError(
            f"found {len(classes)} distinct canonical weights, expected "
            f"{expected_classes}"
        )
    doc = {
        "p": p,
        "q": q,
        "counts": {
            "quivers": len(quiver_rows),
            "algebras": len(algebra_rows),
        },
        "quivers": quiver_rows,
        "algebras": algebra_rows,
        "classes": classes,
    }
    return ClassificationReport(p=p, q=q, doc=doc)


def pin_report(report: ClassificationReport, directory: str | Path) -> Path:
    """Write the report to ``<directory>/atilde-<p>-<q>.json``, or verify it.

    A first call writes the file; later calls recompute nothing but compare
    byte-for-byte and raise :class:`DriftError` on any difference.
    """
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"atilde-{report.p}-{report.q}.json"
    text = pretty_json(report.doc)
    if path.exists():
        current = path.read_text(encoding="utf-8")
        if current != text:
            raise DriftError(
                f"pinned report {path} differs from the freshly computed one"
            )
        return path
    path.write_text(text, encoding="utf-8")
    return path
