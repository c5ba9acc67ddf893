"""Finite-dimensional path algebras with quadratic monomial relations.

A presented algebra here is a quiver together with a set of length-two
paths declared zero.  A relation ``(x, y)`` kills the path that traverses
``x`` first and then ``y``.  Everything downstream — the path basis, the
Cartan matrix ``C[i][j] = #{basis paths i -> j}``, the Coxeter matrix
``Phi = -C^{-T} C``, its characteristic polynomial, and global dimension via
overlap chains — is computed exactly over the integers/rationals.

The graded side: :func:`degree_zero_part` extracts the degree-zero quadratic
monomial algebra of a QP graded with degrees in {0, 1}, and
:func:`build_overline_qp` is its inverse, wrapping a presented algebra into a
graded QP with one degree-one arrow per relation.  The two compose to the
identity in both directions on their natural domains.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .core import (
    Arrow,
    GradedQP,
    Potential,
    Quiver,
    cyclic_derivative,
    require_w_grading,
)
from .errors import (
    ConventionError,
    InfiniteDimensionError,
    InternalInvariantError,
    ParseError,
    UnsupportedPresentationError,
)


class PresentedAlgebra:
    """A quiver with quadratic monomial relations.

    ``relations`` is a sorted tuple of pairs ``(x, y)`` of arrow names with
    ``tgt(x) == src(y)``; the pair kills the path "x then y".
    """

    __slots__ = ("quiver", "relations")

    def __init__(self, quiver: Quiver, relations) -> None:
        seen: set[tuple[str, str]] = set()
        for rel in relations:
            rel = tuple(rel)
            if len(rel) != 2:
                raise ParseError(f"relation {rel!r} is not a pair of arrows")
            x, y = rel
            if not quiver.has_arrow(x):
                raise ParseError(f"relation mentions unknown arrow {x!r}")
            if not quiver.has_arrow(y):
                raise ParseError(f"relation mentions unknown arrow {y!r}")
            if quiver.arrow(x).tgt != quiver.arrow(y).src:
                raise ParseError(
                    f"relation ({x!r}, {y!r}) is not a composable path: "
                    f"{x!r} ends at {quiver.arrow(x).tgt}, "
                    f"{y!r} starts at {quiver.arrow(y).src}"
                )
            seen.add((x, y))
        object.__setattr__(self, "quiver", quiver)
        object.__setattr__(self, "relations", tuple(sorted(seen)))

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("PresentedAlgebra is immutable")

    def __eq__(self, other) -> bool:
        if not isinstance(other, PresentedAlgebra):
            return NotImplemented
        return self.quiver == other.quiver and self.relations == other.relations

    def __hash__(self) -> int:
        return hash((self.quiver, self.relations))

    def __repr__(self) -> str:
        return f"PresentedAlgebra({self.quiver!r}, relations={self.relations!r})"


class PathBasis:
    """All paths of a presented algebra that avoid the relations.

    ``paths_between[(i, j)]`` lists the basis paths from ``i`` to ``j`` as
    tuples of arrow names (the empty tuple is the trivial path at ``i`` and
    appears in ``paths_between[(i, i)]``), ordered by length then
    lexicographically.
    """

    __slots__ = ("algebra", "paths_between", "dimension")

    def __init__(self, algebra: PresentedAlgebra, paths_between) -> None:
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "paths_between", dict(paths_between))
        object.__setattr__(
            self, "dimension", sum(len(v) for v in self.paths_between.values())
        )

    def __setattr__(self, name, value):  # pragma: no cover - defensive
        raise AttributeError("PathBasis is immutable")

    def count(self, src: int, tgt: int) -> int:
        return len(self.paths_between.get((src, tgt), ()))

    def all_paths(self) -> list[tuple[str, ...]]:
        out: list[tuple[str, ...]] = []
        for key in sorted(self.paths_between):
            out.extend(self.paths_between[key])
        return out


def path_basis(algebra: PresentedAlgebra) -> PathBasis:
    """Enumerate the path basis, or raise :class:`InfiniteDimensionError`.

    The algebra is infinite-dimensional exactly when the arrow transition
    graph (an edge x -> y whenever "x then y" composes and is not a relation)
    has a directed cycle; that is checked first, so enumeration always
    terminates.
    """
    q = algebra.quiver
    rel = set(algebra.relations)
    succ: dict[str, list[str]] = {a.name: [] for a in q.arrows}
    for a in q.arrows:
        for b in q.arrows_from(a.tgt):
            if (a.name, b.name) not in rel:
                succ[a.name].append(b.name)
    for lst in succ.values():
        lst.sort()

    color: dict[str, int] = {}

    def visit(name: str, trail: list[str]) -> None:
        color[name] = 1
        trail.append(name)
        for nxt in succ[name]:
            c = color.get(nxt, 0)
            if c == 1:
                cycle = trail[trail.index(nxt):]
                raise InfiniteDimensionError(
                    "the algebra is infinite-dimensional: arrows "
                    + " -> ".join(cycle + [nxt])
                    + " compose forever without meeting a relation"
                )
            if c == 0:
                visit(nxt, trail)
        trail.pop()
        color[name] = 2

    for a in q.arrows:
        if color.get(a.name, 0) == 0:
            visit(a.name, [])

    tails: dict[str, list[tuple[str, ...]]] = {}

    def tails_of(name: str) -> list[tuple[str, ...]]:
        got = tails.get(name)
        if got is None:
            got = [(name,)]
            for nxt in succ[name]:
                got.extend((name,) + rest for rest in tails_of(nxt))
            tails[name] = got
        return got

    max_len = len(q.arrows)
    paths: dict[tuple[int, int], list[tuple[str, ...]]] = {}
    for v in q.vertices:
        paths[(v, v)] = [()]
    for a in q.arrows:
        for path in tails_of(a.name):
            if len(path) > max_len:
                raise InternalInvariantError(
                    "path longer than the arrow count survived the cycle check"
                )
            end = q.arrow(path[-1]).tgt
            paths.setdefault((a.src, end), []).append(path)
    for lst in paths.values():
        lst.sort(key=lambda p: (len(p), p))
    return PathBasis(algebra, paths)


def cartan_matrix(algebra: PresentedAlgebra) -> list[list[int]]:
    """``C[i][j]`` counts basis paths from the i-th to the j-th vertex, in
    sorted vertex order (so diagonal entries are at least 1)."""
    basis = path_basis(algebra)
    vs = algebra.quiver.vertices
    return [[basis.count(i, j) for j in vs] for i in vs]


def _mat_inverse_transpose(cartan: list[list[int]]) -> list[list[Fraction]]:
    """Exact (C^T)^{-1} with a unimodularity check."""
    n = len(cartan)
    # Work on C^T augmented with the identity.
    work = [
        [Fraction(cartan[j][i]) for j in range(n)]
        + [Fraction(1 if j == i else 0) for j in range(n)]
        for i in range(n)
    ]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise ConventionError(
                "the Cartan matrix is singular; Coxeter data is undefined"
            )
        if pivot != col:
            work[col], work[pivot] = work[pivot], work[col]
            det = -det
        det *= work[col][col]
        inv = 1 / work[col][col]
        work[col] = [x * inv for x in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                f = work[r][col]
                work[r] = [x - f * y for x, y in zip(work[r], work[col])]
    if det not in (1, -1):
        raise ConventionError(
            f"the Cartan matrix has determinant {det}, not a unit; "
            "the Coxeter matrix would leave the integers"
        )
    return [row[n:] for row in work]


def coxeter_matrix(algebra: PresentedAlgebra) -> list[list[int]]:
    """The Coxeter matrix ``Phi = -C^{-T} C`` as an exact integer matrix."""
    cartan = cartan_matrix(algebra)
    n = len(cartan)
    cinvt = _mat_inverse_transpose(cartan)
    phi: list[list[int]] = []
    for i in range(n):
        row = []
        for j in range(n):
            val = -sum(cinvt[i][k] * cartan[k][j] for k in range(n))
            if val.denominator != 1:
                raise InternalInvariantError(
                    "Coxeter matrix entry is not an integer despite a "
                    "unimodular Cartan matrix"
                )
            row.append(int(val))
        phi.append(row)
    return phi


def coxeter_polynomial(algebra: PresentedAlgebra) -> tuple[int, ...]:
    """Coefficients of det(X·I - Phi), constant term first, leading 1 last.

    Computed by the Faddeev–LeVerrier recurrence over exact rationals.
    """
    phi = [[Fraction(x) for x in row] for row in coxeter_matrix(algebra)]
    n = len(phi)
    coeffs: list[Fraction] = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    m = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = Phi * M_{k-1} + a_{n-k+1} * I
        nm = [
            [sum(phi[i][t] * m[t][j] for t in range(n)) for j in range(n)]
            for i in range(n)
        ]
        for i in range(n):
            nm[i][i] += coeffs[n - k + 1]
        m = nm
        trace = sum(
            sum(phi[i][t] * m[t][i] for t in range(n)) for i in range(n)
        )
        coeffs[n - k] = -trace / k
    out = []
    for c in coeffs:
        if c.denominator != 1:
            raise InternalInvariantError(
                "characteristic polynomial of an integer matrix came out "
                "non-integral"
            )
        out.append(int(c))
    return tuple(out)


def _chain_lengths(algebra: PresentedAlgebra) -> dict[str, int | float]:
    """Longest overlap chain ending in each arrow.

    ``g(a) = 1 + max(g(x) for relations (x, a))`` with ``g(a) = 1`` when no
    relation ends at ``a``; a cycle of overlaps makes the value infinite.
    """
    before: dict[str, list[str]] = {a.name: [] for a in algebra.quiver.arrows}
    for x, y in algebra.relations:
        before[y].append(x)
    state: dict[str, int] = {}
    value: dict[str, int | float] = {}

    def g(name: str) -> int | float:
        if name in value:
            return value[name]
        if state.get(name) == 1:
            value[name] = math.inf
            return math.inf
        state[name] = 1
        best: int | float = 0
        for x in before[name]:
            got = g(x)
            if got > best:
                best = got
        state[name] = 2
        # A cycle through this arrow may have been recorded mid-recursion.
        if value.get(name) != math.inf:
            value[name] = 1 + best
        return value[name]

    for a in algebra.quiver.arrows:
        g(a.name)
    return value


def projective_dimensions(algebra: PresentedAlgebra) -> dict[int, int | float]:
    """Projective dimension of each simple module, keyed by vertex.

    The simple at ``i`` has projective dimension the longest overlap chain
    among arrows ending at ``i`` (and 0 when no arrow ends there).
    """
    chains = _chain_lengths(algebra)
    out: dict[int, int | float] = {}
    for v in algebra.quiver.vertices:
        incoming = [chains[a.name] for a in algebra.quiver.arrows_to(v)]
        out[v] = max(incoming, default=0)
    return out


def global_dimension(algebra: PresentedAlgebra) -> int | float:
    """The maximum of the simple modules' projective dimensions."""
    return max(projective_dimensions(algebra).values(), default=0)


def degree_zero_part(qp: GradedQP) -> PresentedAlgebra:
    """The degree-zero quadratic monomial algebra of a {0,1}-graded QP.

    Keeps the degree-zero arrows and imposes, for every degree-one arrow,
    the relation given by its cyclic derivative of the potential.  That
    derivative must be a single length-two path (as it is for every QP in
    scope, where potentials are sums of 3-cycles each containing one
    degree-one arrow); anything else raises
    :class:`UnsupportedPresentationError`.
    """
    require_w_grading(qp)
    q = qp.quiver
    zeros = [a for a in q.arrows if qp.degrees[a.name] == 0]
    relations: list[tuple[str, str]] = []
    for a in q.arrows:
        if qp.degrees[a.name] != 1:
            continue
        deriv = cyclic_derivative(a.name, qp.potential)
        if len(deriv) != 1:
            raise UnsupportedPresentationError(
                f"the derivative of {a.name!r} has {len(deriv)} distinct "
                "paths; a single monomial relation is required"
            )
        _, path = deriv[0]
        if len(path) != 2:
            raise UnsupportedPresentationError(
                f"the derivative of {a.name!r} is a path of length "
                f"{len(path)}; only quadratic relations are supported"
            )
        relations.append((path[0], path[1]))
    sub = Quiver(q.vertices, zeros)
    return PresentedAlgebra(sub, relations)


def build_overline_qp(algebra: PresentedAlgebra) -> GradedQP:
    """Wrap a presented algebra into a graded QP whose degree-zero part is
    the algebra again.

    Adds one degree-one arrow ``rK`` per relation ``(x, y)``, running from
    the endpoint of the relation path back to its start, and the potential
    term that traverses ``x``, ``y``, then the new arrow.
    """
    q = algebra.quiver
    used = {a.name for a in q.arrows}
    arrows = list(q.arrows)
    degrees = {a.name: 0 for a in q.arrows}
    terms = []
    for k, (x, y) in enumerate(algebra.relations):
        base = f"r{k}"
        name = base
        suffix = 1
        while name in used:
            suffix += 1
            name = f"{base}~{suffix}"
        used.add(name)
        arrows.append(Arrow(name, q.arrow(y).tgt, q.arrow(x).src))
        degrees[name] = 1
        terms.append((1, (x, y, name)))
    quiver = Quiver(q.vertices, arrows)
    return GradedQP(quiver, Potential(terms), degrees)
