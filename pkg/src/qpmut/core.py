"""Exact core objects: quivers, cyclic words, potentials, graded QPs.

All scalar arithmetic is over ``fractions.Fraction``; no floats appear
anywhere.  Iteration order is deterministic throughout: vertices ascending,
arrows sorted by name, potential terms sorted by their canonical word.

Conventions.  An arrow ``a`` runs ``src(a) -> tgt(a)``.  A word stores its
arrows in traversal order: the word ``(a, b, c)`` traverses ``a`` first, so it
is composable when ``tgt(a) = src(b)``, ``tgt(b) = src(c)`` and, cyclically,
``tgt(c) = src(a)``.  In the usual right-to-left product notation this word
would be written ``cba``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

from .errors import InternalInvariantError, ParseError, PreconditionError

Coeff = Fraction | int | str
PathSum = dict[tuple[str, ...], Fraction]


@dataclass(frozen=True, order=True)
class Arrow:
    """A named arrow ``src -> tgt`` of a quiver."""

    name: str
    src: int
    tgt: int


class Quiver:
    """Finite directed multigraph with named arrows.

    Vertices are integers.  Loops and parallel arrows are representable; arrow
    names are unique and provide the identity of an arrow across operations.
    """

    __slots__ = ("vertices", "arrows", "_by_name", "_out", "_in")

    def __init__(self, vertices: Iterable[int], arrows: Iterable[Arrow | tuple]):
        vs = tuple(sorted({int(v) for v in vertices}))
        normalized = []
        for a in arrows:
            if not isinstance(a, Arrow):
                name, src, tgt = a
                a = Arrow(str(name), int(src), int(tgt))
            normalized.append(a)
        normalized.sort(key=lambda a: a.name)
        by_name: dict[str, Arrow] = {}
        vset = set(vs)
        for a in normalized:
            if a.name in by_name:
                raise ParseError(f"duplicate arrow name {a.name!r}")
            if a.src not in vset:
                raise ParseError(f"arrow {a.name!r}: source vertex {a.src} not in vertex set")
            if a.tgt not in vset:
                raise ParseError(f"arrow {a.name!r}: target vertex {a.tgt} not in vertex set")
            by_name[a.name] = a
        object.__setattr__(self, "vertices", vs)
        object.__setattr__(self, "arrows", tuple(normalized))
        object.__setattr__(self, "_by_name", by_name)
        outm = {v: [] for v in vs}
        inm = {v: [] for v in vs}
        for a in normalized:
            outm[a.src].append(a)
            inm[a.tgt].append(a)
        object.__setattr__(self, "_out", {v: tuple(l) for v, l in outm.items()})
        object.__setattr__(self, "_in", {v: tuple(l) for v, l in inm.items()})

    def __setattr__(self, *_):  # pragma: no cover - defensive
        raise AttributeError("Quiver is immutable")

    def arrow(self, name: str) -> Arrow:
        try:
            return self._by_name[name]
        except KeyError:
            raise PreconditionError(f"no arrow named {name!r}") from None

    def has_arrow(self, name: str) -> bool:
        return name in self._by_name

    def arrows_from(self, v: int) -> tuple[Arrow, ...]:
        return self._out.get(v, ())

    def arrows_to(self, v: int) -> tuple[Arrow, ...]:
        return self._in.get(v, ())

    def arrows_at(self, v: int) -> tuple[Arrow, ...]:
        """All arrows incident to ``v``; a loop at ``v`` appears once."""
        loops = tuple(a for a in self._out.get(v, ()) if a.tgt == v)
        return tuple(a for a in self._out.get(v, ()) if a.tgt != v) + loops + tuple(
            a for a in self._in.get(v, ()) if a.src != v
        )

    def valency(self, v: int) -> int:
        """Number of incident arrow ends at ``v`` (a loop counts twice)."""
        return len(self._out.get(v, ())) + len(self._in.get(v, ()))

    def is_acyclic(self) -> bool:
        """True when the quiver has no oriented cycle (loops included)."""
        indeg = {v: len(self._in[v]) for v in self.vertices}
        stack = [v for v in self.vertices if indeg[v] == 0]
        seen = 0
        while stack:
            v = stack.pop()
            seen += 1
            for a in self._out[v]:
                indeg[a.tgt] -= 1
                if indeg[a.tgt] == 0:
                    stack.append(a.tgt)
        return seen == len(self.vertices)

    def induced(self, vertices: Iterable[int]) -> "Quiver":
        """Full subquiver on the given vertices."""
        keep = set(vertices)
        return Quiver(keep, [a for a in self.arrows if a.src in keep and a.tgt in keep])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Quiver)
            and self.vertices == other.vertices
            and self.arrows == other.arrows
        )

    def __hash__(self) -> int:
        return hash((self.vertices, self.arrows))

    def __repr__(self) -> str:
        return f"Quiver(vertices={list(self.vertices)}, arrows={len(self.arrows)})"


class CyclicWord:
    """A nonempty cyclic word of arrow names, stored in traversal order.

    Two rotations of the same sequence are the same word; the stored form is
    the lexicographically least rotation (ties pick the earliest rotation, and
    coincide anyway).  Composability with a particular quiver is checked by
    :func:`validate_cycle`, not here.
    """

    __slots__ = ("arrows",)

    def __init__(self, arrows: Iterable[str]):
        t = tuple(str(x) for x in arrows)
        if not t:
            raise ParseError("cyclic word must be nonempty")
        best = min(t[i:] + t[:i] for i in range(len(t)))
        object.__setattr__(self, "arrows", best)

    def __setattr__(self, *_):  # pragma: no cover - defensive
        raise AttributeError("CyclicWord is immutable")

    def __len__(self) -> int:
        return len(self.arrows)

    def __iter__(self) -> Iterator[str]:
        return iter(self.arrows)

    def __eq__(self, other) -> bool:
        return isinstance(other, CyclicWord) and self.arrows == other.arrows

    def __lt__(self, other: "CyclicWord") -> bool:
        return self.arrows < other.arrows

    def __hash__(self) -> int:
        return hash(self.arrows)

    def __repr__(self) -> str:
        return f"CyclicWord({'.'.join(self.arrows)})"


def canonicalize_word(arrows: Iterable[str]) -> CyclicWord:
    """Rotate a nonempty arrow sequence to its canonical representative."""
    return CyclicWord(arrows)


def validate_cycle(quiver: Quiver, word: CyclicWord, where: str = "cycle") -> None:
    """Check that ``word`` is a cyclically composable path in ``quiver``."""
    seq = word.arrows
    for k, name in enumerate(seq):
        if not quiver.has_arrow(name):
            raise ParseError(f"{where}: unknown arrow {name!r} at position {k}")
    for k, name in enumerate(seq):
        nxt = seq[(k + 1) % len(seq)]
        if quiver.arrow(name).tgt != quiver.arrow(nxt).src:
            raise ParseError(
                f"{where}: arrows {name!r} (position {k}) and {nxt!r} are not composable"
            )


def validate_path(quiver: Quiver, path: Sequence[str], where: str = "path") -> None:
    """Check that ``path`` is an (open) composable path in ``quiver``."""
    for k, name in enumerate(path):
        if not quiver.has_arrow(name):
            raise ParseError(f"{where}: unknown arrow {name!r} at position {k}")
        if k + 1 < len(path) and quiver.arrow(name).tgt != quiver.arrow(path[k + 1]).src:
            raise ParseError(
                f"{where}: arrows {name!r} (position {k}) and {path[k + 1]!r} are not composable"
            )


class Potential:
    """A formal rational linear combination of cyclic words.

    Terms with cyclically equivalent words merge, zero coefficients drop, and
    the surviving terms are sorted by canonical word, so structural equality of
    potentials is literal equality of ``terms``.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable[tuple[Coeff, CyclicWord | Iterable[str]]] = ()):
        acc: dict[CyclicWord, Fraction] = {}
        for coeff, word in terms:
            w = word if isinstance(word, CyclicWord) else CyclicWord(word)
            acc[w] = acc.get(w, Fraction(0)) + Fraction(coeff)
        kept = [(c, w) for w, c in acc.items() if c != 0]
        kept.sort(key=lambda t: t[1].arrows)
        object.__setattr__(self, "terms", tuple(kept))

    def __setattr__(self, *_):  # pragma: no cover - defensive
        raise AttributeError("Potential is immutable")

    @classmethod
    def zero(cls) -> "Potential":
        return cls(())

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def coefficient(self, word: CyclicWord) -> Fraction:
        for c, w in self.terms:
            if w == word:
                return c
        return Fraction(0)

    def __add__(self, other: "Potential") -> "Potential":
        return Potential(list(self.terms) + list(other.terms))

    def __eq__(self, other) -> bool:
        return isinstance(other, Potential) and self.terms == other.terms

    def __hash__(self) -> int:
        return hash(self.terms)

    def __repr__(self) -> str:
        if not self.terms:
            return "Potential(0)"
        return "Potential(" + " + ".join(f"{c}*{'.'.join(w.arrows)}" for c, w in self.terms) + ")"


def validate_potential(quiver: Quiver, potential: Potential) -> None:
    for _, w in potential.terms:
        validate_cycle(quiver, w, where="potential term")


class GradedQP:
    """A quiver with potential, optionally carrying an integer arrow grading.

    ``degrees`` maps every arrow name to an integer (or is ``None`` for an
    ungraded QP).  When ``homogeneous`` is set, every potential term must have
    total degree 1 under ``degrees``; operations that preserve homogeneity
    propagate the flag and the constructor re-checks it, so a degree slip
    inside an algorithm surfaces immediately.
    """

    __slots__ = ("quiver", "potential", "degrees", "homogeneous")

    def __init__(
        self,
        quiver: Quiver,
        potential: Potential | None = None,
        degrees: Mapping[str, int] | None = None,
        homogeneous: bool = False,
    ):
        potential = potential if potential is not None else Potential.zero()
        validate_potential(quiver, potential)
        if degrees is not None:
            degrees = {str(k): int(v) for k, v in degrees.items()}
            missing = [a.name for a in quiver.arrows if a.name not in degrees]
            extra = sorted(set(degrees) - {a.name for a in quiver.arrows})
            if missing:
                raise ParseError(f"degree map misses arrows: {', '.join(missing)}")
            if extra:
                raise ParseError(f"degree map names unknown arrows: {', '.join(extra)}")
        if homogeneous:
            if degrees is None:
                raise PreconditionError("homogeneous flag requires a degree map")
            for c, w in potential.terms:
                total = sum(degrees[x] for x in w.arrows)
                if total != 1:
                    raise InternalInvariantError(
                        f"potential term {'.'.join(w.arrows)} has degree {total}, expected 1"
                    )
        object.__setattr__(self, "quiver", quiver)
        object.__setattr__(self, "potential", potential)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "homogeneous", bool(homogeneous))

    def __setattr__(self, *_):  # pragma: no cover - defensive
        raise AttributeError("GradedQP is immutable")

    @property
    def graded(self) -> bool:
        return self.degrees is not None

    def degree_of(self, arrow_name: str) -> int:
        if self.degrees is None:
            raise PreconditionError("QP carries no degree map")
        return self.degrees[arrow_name]

    def word_degree(self, word: CyclicWord | Sequence[str]) -> int:
        if self.degrees is None:
            raise PreconditionError("QP carries no degree map")
        seq = word.arrows if isinstance(word, CyclicWord) else tuple(word)
        return sum(self.degrees[x] for x in seq)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GradedQP)
            and self.quiver == other.quiver
            and self.potential == other.potential
            and self.degrees == other.degrees
        )

    def __repr__(self) -> str:
        g = "graded" if self.graded else "ungraded"
        return f"GradedQP({self.quiver!r}, {len(self.potential.terms)} terms, {g})"


def path_sum_add(acc: PathSum, path: tuple[str, ...], coeff: Fraction) -> None:
    """Accumulate ``coeff``·``path`` into ``acc`` in place, dropping zeros."""
    new = acc.get(path, Fraction(0)) + coeff
    if new == 0:
        acc.pop(path, None)
    else:
        acc[path] = new


def cyclic_derivative(arrow_name: str, potential: Potential) -> list[tuple[Fraction, tuple[str, ...]]]:
    """Cyclic derivative of a potential with respect to one arrow.

    For every occurrence of the arrow inside a term, the term opens up at that
    occurrence: the word ``(x_0, ..., x_{n-1})`` with ``x_k`` the occurrence
    contributes the open path ``(x_{k+1}, ..., x_{n-1}, x_0, ..., x_{k-1})``.
    All contributions are summed; the result is a list of (coefficient, path)
    pairs sorted by path.  Each path runs from the arrow's target to its
    source.  A length-one term differentiates to the empty path ``()``.
    """
    acc: PathSum = {}
    for coeff, word in potential.terms:
        seq = word.arrows
        for k, x in enumerate(seq):
            if x == arrow_name:
                path_sum_add(acc, seq[k + 1 :] + seq[:k], coeff)
    return sorted(((c, p) for p, c in acc.items()), key=lambda t: t[1])


def jacobian_relations(
    qp: GradedQP, degree_one_only: bool = False
) -> list[tuple[str, list[tuple[Fraction, tuple[str, ...]]]]]:
    """All cyclic derivatives of the potential, one entry per arrow (sorted).

    With ``degree_one_only`` the list restricts to arrows of degree 1, which is
    the generating set of relations relevant for the degree-zero part.
    """
    names = [a.name for a in qp.quiver.arrows]
    if degree_one_only:
        if qp.degrees is None:
            raise PreconditionError("degree_one_only requires a degree map")
        names = [n for n in names if qp.degrees[n] == 1]
    return [(n, cyclic_derivative(n, qp.potential)) for n in names]


def _rational_rank(rows: list[PathSum]) -> int:
    """Rank over Q of sparse vectors indexed by paths (exact elimination)."""
    pivots: list[tuple[tuple[str, ...], PathSum]] = []
    for row in rows:
        work = dict(row)
        for key, pivot in pivots:
            if key in work:
                factor = work[key]
                for k2, v2 in pivot.items():
                    path_sum_add(work, k2, -factor * v2)
        if work:
            key = min(work)
            inv = Fraction(1) / work[key]
            normalized = {k: v * inv for k, v in work.items()}
            pivots.append((key, normalized))
    return len(pivots)


@dataclass(frozen=True)
class GradingCheck:
    """Outcome of the W-grading test; ``reason`` explains a failure."""

    ok: bool
    reason: str | None = None


def check_w_grading(qp: GradedQP) -> GradingCheck:
    """Decide whether the grading of ``qp`` is a W-grading.

    Requirements: every arrow degree lies in {0, 1}; every potential term is
    homogeneous of total degree 1; and the cyclic derivatives with respect to
    the degree-1 arrows are nonzero and linearly independent over Q.
    """
    if qp.degrees is None:
        return GradingCheck(False, "no degree map")
    bad = sorted(n for n, d in qp.degrees.items() if d not in (0, 1))
    if bad:
        return GradingCheck(False, f"arrow degrees outside {{0,1}}: {', '.join(bad)}")
    for c, w in qp.potential.terms:
        total = qp.word_degree(w)
        if total != 1:
            return GradingCheck(
                False, f"term {'.'.join(w.arrows)} has total degree {total}, expected 1"
            )
    ones = [a.name for a in qp.quiver.arrows if qp.degrees[a.name] == 1]
    rows: list[PathSum] = []
    for n in ones:
        deriv = cyclic_derivative(n, qp.potential)
        if not deriv:
            return GradingCheck(False, f"degree-1 arrow {n!r} has zero cyclic derivative")
        rows.append({path: c for c, path in deriv})
    if _rational_rank(rows) != len(rows):
        return GradingCheck(False, "cyclic derivatives of degree-1 arrows are linearly dependent")
    return GradingCheck(True)


def require_w_grading(qp: GradedQP) -> None:
    check = check_w_grading(qp)
    if not check.ok:
        raise PreconditionError(f"not a W-grading: {check.reason}")
