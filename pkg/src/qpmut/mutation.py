"""Mutation of (graded) quivers with potential.

``premutate`` performs the raw step at a vertex ``i`` with no loop or 2-cycle
touching it: for every incoming ``a: u -> i`` and outgoing ``b: i -> v`` a
composite ``[b*a]: u -> v`` appears, all arrows at ``i`` are replaced by
reversed copies, every passage of the potential through ``i`` contracts onto
the composite, and one new cubic term (composite, reversed-outgoing,
reversed-incoming) is added per composite.  Degrees follow the chosen
convention: the left rule gives a reversed incoming arrow degree ``1 - d(a)``
and a reversed outgoing arrow ``-d(b)``; the right rule swaps which side picks
up the ``+1``.  Composites always add degrees.  Both rules keep a potential
homogeneous of total degree 1.

``reduce`` removes the trivial part: while some term is a quadratic 2-cycle
``lam * (x, y)``, substitute simultaneously ``x -> x - lam^-1 * D_y(rest)``
and ``y -> y - lam^-1 * D_x(rest)`` (cyclic derivatives of the remaining
terms, which are paths of the right shape), after which ``x`` and ``y``
survive only in the quadratic term itself and get deleted together with it.
Intermediate words are capped at twice the arrow count; exceeding the cap or
failing to make progress raises NonterminationError.

``mutate`` is premutate followed by reduce.  Sequences apply first entry
first.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction

from .canonical import canonical_form, canonical_key
from .core import Arrow, CyclicWord, GradedQP, PathSum, Potential, Quiver, path_sum_add
from .errors import (
    CapacityError,
    InternalInvariantError,
    NonterminationError,
    PreconditionError,
    SearchBudgetError,
)
from .shape import has_loop, matilde_potential, two_cycle_pairs

DIRECTIONS = ("left", "right", "plain")

DEFAULT_SEARCH_BUDGET = 20_000


class _Names:
    """Fresh-name allocator that avoids the names already in use."""

    def __init__(self, existing):
        self.used = set(existing)

    def fresh(self, base: str) -> str:
        name = base
        k = 1
        while name in self.used:
            k += 1
            name = f"{base}~{k}"
        self.used.add(name)
        return name


def check_mutable(quiver: Quiver, vertex: int) -> None:
    """Raise unless mutation at ``vertex`` is defined (no loop or 2-cycle there)."""
    if vertex not in set(quiver.vertices):
        raise PreconditionError(f"vertex {vertex} is not in the quiver")
    for a in quiver.arrows_at(vertex):
        if a.src == a.tgt:
            raise PreconditionError(f"loop {a.name!r} at mutation vertex {vertex}")
    for a in quiver.arrows_to(vertex):
        for b in quiver.arrows_from(vertex):
            if b.tgt == a.src:
                raise PreconditionError(
                    f"2-cycle through vertex {vertex}: {a.name!r}, {b.name!r}"
                )


def is_mutable(quiver: Quiver, vertex: int) -> bool:
    try:
        check_mutable(quiver, vertex)
    except PreconditionError:
        return False
    return True


def premutate(qp: GradedQP, vertex: int, direction: str = "left") -> GradedQP:
    """One unreduced mutation step at ``vertex``; see the module docstring."""
    if direction not in DIRECTIONS:
        raise PreconditionError(f"direction must be one of {', '.join(DIRECTIONS)}")
    if direction != "plain" and qp.degrees is None:
        raise PreconditionError(
            "graded mutation requires a degree map; use direction='plain'"
        )
    q = qp.quiver
    check_mutable(q, vertex)
    ins = list(q.arrows_to(vertex))
    outs = list(q.arrows_from(vertex))
    keep = [a for a in q.arrows if a.src != vertex and a.tgt != vertex]

    names = _Names(a.name for a in q.arrows)
    new_arrows: list[Arrow] = list(keep)
    degrees: dict[str, int] | None = None
    if direction != "plain":
        degrees = {a.name: qp.degrees[a.name] for a in keep}

    composite: dict[tuple[str, str], str] = {}
    for a in ins:
        for b in outs:
            nm = names.fresh(f"[{b.name}*{a.name}]")
            composite[(a.name, b.name)] = nm
            new_arrows.append(Arrow(nm, a.src, b.tgt))
            if degrees is not None:
                degrees[nm] = qp.degrees[a.name] + qp.degrees[b.name]
    star: dict[str, str] = {}
    for a in ins:
        nm = names.fresh(a.name + "*")
        star[a.name] = nm
        new_arrows.append(Arrow(nm, vertex, a.src))
        if degrees is not None:
            d = qp.degrees[a.name]
            degrees[nm] = 1 - d if direction == "left" else -d
    for b in outs:
        nm = names.fresh(b.name + "*")
        star[b.name] = nm
        new_arrows.append(Arrow(nm, b.tgt, vertex))
        if degrees is not None:
            d = qp.degrees[b.name]
            degrees[nm] = -d if direction == "left" else 1 - d

    tgt_of = {a.name: a.tgt for a in q.arrows}
    new_terms: list[tuple[Fraction, tuple[str, ...]]] = []
    for coeff, word in qp.potential.terms:
        seq = word.arrows
        length = len(seq)
        hits = [k for k in range(length) if tgt_of[seq[k]] == vertex]
        if not hits:
            new_terms.append((coeff, seq))
            continue
        consumed = {(k + 1) % length for k in hits}
        out_seq: list[str] = []
        for k in range(length):
            if k in consumed:
                continue
            if tgt_of[seq[k]] == vertex:
                out_seq.append(composite[(seq[k], seq[(k + 1) % length])])
            else:
                out_seq.append(seq[k])
        new_terms.append((coeff, tuple(out_seq)))
    for a in ins:
        for b in outs:
            new_terms.append(
                (Fraction(1), (composite[(a.name, b.name)], star[b.name], star[a.name]))
            )

    homogeneous = qp.homogeneous and degrees is not None
    return GradedQP(
        Quiver(q.vertices, new_arrows),
        Potential(new_terms),
        degrees,
        homogeneous=homogeneous,
    )


def _derivative_of(terms: dict[tuple[str, ...], Fraction], name: str) -> PathSum:
    acc: PathSum = {}
    for w, c in terms.items():
        for k, letter in enumerate(w):
            if letter == name:
                path_sum_add(acc, w[k + 1 :] + w[:k], c)
    return acc


def reduce(qp: GradedQP) -> GradedQP:
    """Split off the trivial part: after this, no term has word length <= 2.

    The vertex set never changes; the arrows of eliminated 2-cycle terms
    disappear pairwise.  Degree homogeneity, when flagged, is preserved (the
    substituted paths have exactly the replaced arrow's degree).
    """
    q = qp.quiver
    arrows = {a.name: a for a in q.arrows}
    degrees = dict(qp.degrees) if qp.degrees is not None else None
    terms: dict[tuple[str, ...], Fraction] = {w.arrows: c for c, w in qp.potential.terms}
    cap = 2 * max(1, len(q.arrows))
    max_rounds = 4 * (len(q.arrows) + 1)
    rounds = 0
    while True:
        rounds += 1
        if rounds > max_rounds:
            raise NonterminationError("reduction did not terminate within its round cap")
        quads = sorted(w for w in terms if len(w) == 2)
        if not quads:
            shorts = sorted(w for w in terms if len(w) < 2)
            if shorts:
                raise NonterminationError(
                    f"term {'.'.join(shorts[0])} of length 1 cannot be reduced"
                )
            break
        w0 = next((w for w in quads if w[0] != w[1]), None)
        if w0 is None:
            raise NonterminationError(
                f"quadratic term on the single arrow {quads[0][0]!r} cannot be reduced"
            )
        x, y = w0
        lam = terms[w0]
        rest = {w: c for w, c in terms.items() if w != w0}
        if not any(x in w or y in w for w in rest):
            del terms[w0]
            del arrows[x]
            del arrows[y]
            if degrees is not None:
                degrees.pop(x)
                degrees.pop(y)
            continue
        dx = _derivative_of(rest, x)
        dy = _derivative_of(rest, y)
        inv = Fraction(-1) / lam
        substitution = {
            x: [(Fraction(1), (x,))] + [(inv * c, p) for p, c in sorted(dy.items())],
            y: [(Fraction(1), (y,))] + [(inv * c, p) for p, c in sorted(dx.items())],
        }
        new_terms: dict[tuple[str, ...], Fraction] = {}
        for w, c in terms.items():
            options = [substitution.get(letter, [(Fraction(1), (letter,))]) for letter in w]
            for combo in itertools.product(*options):
                coeff = c
                seq: list[str] = []
                for oc, op in combo:
                    coeff *= oc
                    seq.extend(op)
                if coeff == 0:
                    continue
                if not seq:
                    raise NonterminationError("reduction produced an empty word")
                if len(seq) > cap:
                    raise NonterminationError(
                        f"intermediate word of length {len(seq)} exceeded cap {cap}"
                    )
                word = CyclicWord(seq).arrows
                new_terms[word] = new_terms.get(word, Fraction(0)) + coeff
        terms = {w: c for w, c in new_terms.items() if c != 0}

    out_quiver = Quiver(q.vertices, list(arrows.values()))
    potential = Potential([(c, w) for w, c in sorted(terms.items())])
    return GradedQP(
        out_quiver,
        potential,
        degrees,
        homogeneous=qp.homogeneous and degrees is not None,
    )


def mutate(qp: GradedQP, vertex: int, direction: str = "left") -> GradedQP:
    """Premutation at ``vertex`` followed by reduction."""
    return reduce(premutate(qp, vertex, direction))


def mutate_sequence(qp: GradedQP, steps) -> GradedQP:
    """Apply mutation steps first entry first; each step is (vertex, direction)."""
    for vertex, direction in steps:
        qp = mutate(qp, vertex, direction)
    return qp


def exchange_matrix(quiver: Quiver) -> list[list[int]]:
    """Skew-symmetric matrix B with B[i][j] = #(i->j) - #(j->i), vertices sorted."""
    if has_loop(quiver):
        raise PreconditionError("exchange matrix undefined for quivers with loops")
    idx = {v: i for i, v in enumerate(quiver.vertices)}
    n = len(quiver.vertices)
    B = [[0] * n for _ in range(n)]
    for a in quiver.arrows:
        B[idx[a.src]][idx[a.tgt]] += 1
        B[idx[a.tgt]][idx[a.src]] -= 1
    return B


def matrix_mutation(B: list[list[int]], k: int) -> list[list[int]]:
    """Standard exchange-matrix mutation at index ``k`` (0-based)."""
    n = len(B)
    if not 0 <= k < n:
        raise PreconditionError(f"mutation index {k} out of range")
    for i in range(n):
        if len(B[i]) != n:
            raise PreconditionError("exchange matrix must be square")
        for j in range(n):
            if B[i][j] != -B[j][i]:
                raise PreconditionError("exchange matrix must be skew-symmetric")
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            if i == k or j == k:
                out[i][j] = -B[i][j]
            else:
                out[i][j] = B[i][j] + (abs(B[i][k]) * B[k][j] + B[i][k] * abs(B[k][j])) // 2
    return out


@dataclass(frozen=True)
class ClassMember:
    """One isomorphism class in a mutation class.

    ``quiver`` is the canonical representative; ``witness`` is a mutation
    sequence from the seed (in the seed's labels) reaching this class;
    ``reached`` is the labeled QP that first reached it during the search.
    """

    key: tuple
    quiver: Quiver
    witness: tuple[int, ...]
    reached: GradedQP = field(compare=False, repr=False)


@dataclass(frozen=True)
class MutationClass:
    seed: Quiver
    members: tuple[ClassMember, ...]
    edges: tuple[tuple[tuple, int, tuple], ...]

    def __len__(self) -> int:
        return len(self.members)

    def keys(self) -> set[tuple]:
        return {m.key for m in self.members}

    def contains(self, quiver: Quiver) -> bool:
        return canonical_key(quiver) in self.keys()


def mutation_class(
    seed: Quiver,
    max_size: int | None = None,
    potential: Potential | None = None,
) -> MutationClass:
    """Breadth-first closure of a 2-acyclic seed under plain mutation.

    The potential defaults to the seed's class potential (zero for acyclic
    seeds, the triangle sum for tree-of-triangles shapes, the cycle
    decomposition's anchored triangles otherwise) - the rigid choice for the
    classes in scope.  States deduplicate by ungraded canonical form; every
    expansion is
    cross-checked against matrix mutation of the exchange matrix, and an
    unreduced 2-cycle in any result aborts the search, since in-scope classes
    never produce one.  Exceeding ``max_size`` raises CapacityError whose
    ``partial`` carries the class explored so far.
    """
    if has_loop(seed):
        raise PreconditionError("mutation class requires a loop-free seed")
    if two_cycle_pairs(seed):
        raise PreconditionError("mutation class requires a 2-acyclic seed")
    if potential is None:
        potential = matilde_potential(seed)
        if potential is None:
            raise PreconditionError(
                "no default potential for this seed shape; pass one explicitly"
            )
    pot = potential
    qp0 = GradedQP(seed, pot)
    cf0 = canonical_form(seed)
    found: dict[tuple, tuple[Quiver, tuple[int, ...], GradedQP]] = {
        cf0.key: (cf0.quiver, (), qp0)
    }
    edges: list[tuple[tuple, int, tuple]] = []
    seen_edges: set[tuple] = set()
    queue: deque = deque([(qp0, (), cf0.key)])

    def snapshot() -> "MutationClass":
        ms = tuple(
            ClassMember(k, q, w, reached)
            for k, (q, w, reached) in sorted(found.items(), key=lambda kv: kv[0])
        )
        return MutationClass(seed=seed, members=ms, edges=tuple(edges))

    while queue:
        qp, witness, key = queue.popleft()
        B = exchange_matrix(qp.quiver)
        idx = {v: i for i, v in enumerate(qp.quiver.vertices)}
        for v in qp.quiver.vertices:
            child = mutate(qp, v, "plain")
            if exchange_matrix(child.quiver) != matrix_mutation(B, idx[v]):
                raise InternalInvariantError(
                    f"quiver mutation at {v} disagrees with matrix mutation"
                )
            if two_cycle_pairs(child.quiver):
                raise InternalInvariantError(
                    "mutation produced a 2-cycle; the seed is outside the supported classes"
                )
            cfc = canonical_form(child.quiver)
            if cfc.key not in found:
                found[cfc.key] = (cfc.quiver, witness + (v,), child)
                if max_size is not None and len(found) > max_size:
                    raise CapacityError(
                        f"mutation class exceeded max_size={max_size}", partial=snapshot()
                    )
                queue.append((child, witness + (v,), cfc.key))
            ek = (key, v, cfc.key)
            if ek not in seen_edges:
                seen_edges.add(ek)
                edges.append(ek)
    return snapshot()


def find_acyclic_sequence(qp: GradedQP, budget: int | None = None) -> list[int]:
    """Shortest plain-mutation sequence making the quiver acyclic (BFS).

    An acyclic quiver supports no cyclic word, so its potential is
    automatically zero.  The budget bounds the number of distinct forms
    explored; running out raises SearchBudgetError.
    """
    budget = budget if budget is not None else DEFAULT_SEARCH_BUDGET
    base = GradedQP(qp.quiver, qp.potential)
    if base.quiver.is_acyclic():
        return []
    seen = {canonical_key(base.quiver)}
    queue: deque = deque([(base, [])])
    while queue:
        cur, seq = queue.popleft()
        for v in cur.quiver.vertices:
            if not is_mutable(cur.quiver, v):
                continue
            child = mutate(cur, v, "plain")
            if child.quiver.is_acyclic():
                if not child.potential.is_zero:
                    raise InternalInvariantError("acyclic quiver with nonzero potential")
                return seq + [v]
            k = canonical_key(child.quiver)
            if k not in seen:
                if len(seen) >= budget:
                    raise SearchBudgetError(
                        f"no acyclic form found within budget {budget}"
                    )
                seen.add(k)
                queue.append((child, seq + [v]))
    raise SearchBudgetError("no acyclic form is reachable from the input")
