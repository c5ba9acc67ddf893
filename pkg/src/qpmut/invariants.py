"""Derived invariants of graded QPs on one underlying cycle.

The central quantity is the weight of a W-grading: on a quiver whose
underlying graph is a single cycle, the weight is the degree sum over the
arrows of the larger orientation class minus the degree sum over the smaller
one.  Two independent routes compute it for members of the cycle class:

* :func:`weight_structural` reads the weight straight off the cycle
  decomposition(s) of the quiver, and demands that all decompositions agree;
* :func:`weight_via_mutation` first makes the quiver acyclic by left
  mutations (the weight is invariant along the way) and then reads the weight
  off the bare cycle.

The two must agree everywhere; tests and the classifier assert exactly that,
which is why they are deliberately kept as separate code paths.

Also here: equivalence of gradings by vertex offsets (optionally up to a
quiver automorphism), derived equivalence of class members via their acyclic
reducts, the count of derived classes for given arm lengths, the closed form
for the Coxeter polynomial coefficients, and the counts of exceptional
Auslander-Reiten components attached to a nonzero weight.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .canonical import canonical_form, canonical_key, quiver_automorphisms
from .core import GradedQP, Quiver, require_w_grading
from .errors import (
    AmbiguityError,
    InternalInvariantError,
    PreconditionError,
    ScopeError,
)
from .mutation import find_acyclic_sequence, mutate_sequence
from .shape import (
    anchored_potential_terms,
    is_tree,
    matilde_decompositions,
    single_cycle_traversal,
)


@dataclass(frozen=True)
class WeightResult:
    """A computed weight.

    ``weight`` is signed relative to the arm labeling that makes the first
    arm the larger one (for equal arms, relative to the deterministic
    traversal); ``canonical`` equals ``weight`` for unequal arms and
    ``abs(weight)`` for equal arms, making it a genuine invariant.  ``p`` and
    ``q`` are the arm totals, ``p >= q``.  ``witness`` records how the value
    was obtained.
    """

    weight: int
    canonical: int
    p: int
    q: int
    witness: dict = field(compare=False)


def weight_of_grading(quiver: Quiver, degrees: dict[str, int]) -> WeightResult:
    """Weight of an integer grading on a quiver that is one underlying cycle.

    The quiver must be acyclic (equivalently: both orientation classes of the
    cycle are nonempty).
    """
    GradedQP(quiver, None, degrees)  # validates the degree map
    trav = single_cycle_traversal(quiver)
    if trav is None:
        raise PreconditionError(
            "weight of a grading needs a quiver that is a single underlying cycle"
        )
    fwd = [name for name, f in trav if f]
    bwd = [name for name, f in trav if not f]
    if not fwd or not bwd:
        raise PreconditionError(
            "the cycle is oriented; the weight needs an acyclic cycle quiver"
        )
    if len(fwd) >= len(bwd):
        p_names, q_names = fwd, bwd
    else:
        p_names, q_names = bwd, fwd
    p, q = len(p_names), len(q_names)
    w = sum(degrees[n] for n in p_names) - sum(degrees[n] for n in q_names)
    canonical = w if p > q else abs(w)
    return WeightResult(
        weight=w,
        canonical=canonical,
        p=p,
        q=q,
        witness={
            "method": "cycle",
            "pArm": list(p_names),
            "qArm": list(q_names),
        },
    )


def weight_structural(qp: GradedQP) -> WeightResult:
    """Weight read off the cycle decomposition(s), without any mutation.

    Preconditions: the grading is a W-grading, the quiver admits a cycle
    decomposition, and the potential is the class potential of one of them.
    When several decompositions exist they must agree on (p, q) and on the
    canonical weight; disagreement raises :class:`AmbiguityError`.
    """
    require_w_grading(qp)
    if qp.degrees is None:  # unreachable after the check; for type-checkers
        raise PreconditionError("weight needs a degree map")
    decs = matilde_decompositions(qp.quiver)
    if not decs:
        raise PreconditionError(
            "the quiver admits no cycle decomposition; it is not in the cycle class"
        )
    words = {w.arrows for _, w in qp.potential.terms}
    # Only decompositions whose anchored triangles are the potential's terms
    # describe this QP.  The restriction matters: with parallel cycle arrows
    # the anchor assignment decides which arm each branch extends, and an
    # assignment not matching the potential can even flip the signed weight.
    compatible = [
        d
        for d in decs
        if set(anchored_potential_terms(qp.quiver, d)) == words
    ]
    if not compatible:
        raise PreconditionError(
            "the potential does not match the class potential of any cycle "
            "decomposition of the quiver"
        )
    outcomes = []
    for dec in compatible:
        fwd = [name for name, f in dec.cycle if f]
        bwd = [name for name, f in dec.cycle if not f]
        tf, tb = dec.arm_totals
        if tf >= tb:
            p_names, q_names, p_tot, q_tot = fwd, bwd, tf, tb
        else:
            p_names, q_names, p_tot, q_tot = bwd, fwd, tb, tf
        w = sum(qp.degrees[n] for n in p_names) - sum(qp.degrees[n] for n in q_names)
        canonical = w if p_tot > q_tot else abs(w)
        outcomes.append((p_tot, q_tot, canonical, w, p_names, q_names))
    distinct = sorted({(p, q, c) for p, q, c, _, _, _ in outcomes})
    if len(distinct) > 1:
        raise AmbiguityError(
            "cycle decompositions disagree on the weight data: "
            + "; ".join(f"(p={p}, q={q}, weight={c})" for p, q, c in distinct)
        )
    p_tot, q_tot, canonical, w, p_names, q_names = outcomes[0]
    return WeightResult(
        weight=w,
        canonical=canonical,
        p=p_tot,
        q=q_tot,
        witness={
            "method": "structural",
            "decompositions": len(decs),
            "cyclePArm": list(p_names),
            "cycleQArm": list(q_names),
        },
    )


_SEQUENCE_CACHE: dict[tuple, tuple[int, ...]] = {}


def _acyclic_reduct(qp: GradedQP, budget: int | None) -> tuple[GradedQP, list[int]]:
    """Left-mutate ``qp`` acyclic, caching sequences per canonical quiver.

    The cache stores the mutation sequence in canonical vertex labels; a hit
    transports it back through the relabeling witness.  A replay that fails
    to produce an acyclic quiver evicts the entry and searches afresh.
    """
    cf = canonical_form(qp.quiver)
    cached = _SEQUENCE_CACHE.get(cf.key)
    if cached is not None:
        back = {c: o for o, c in cf.vertex_map.items()}
        seq = [back[u] for u in cached]
        red = mutate_sequence(qp, [(v, "left") for v in seq])
        if red.quiver.is_acyclic():
            return red, seq
        _SEQUENCE_CACHE.pop(cf.key, None)
    seq = find_acyclic_sequence(qp, budget)
    _SEQUENCE_CACHE[cf.key] = tuple(cf.vertex_map[v] for v in seq)
    red = mutate_sequence(qp, [(v, "left") for v in seq])
    if not red.quiver.is_acyclic():
        raise InternalInvariantError(
            "replaying a freshly found acyclic sequence left the quiver cyclic"
        )
    return red, seq


def weight_via_mutation(qp: GradedQP, budget: int | None = None) -> WeightResult:
    """Weight computed by left-mutating to an acyclic cycle quiver.

    Accepts any integer grading (degrees need not stay in {0, 1}; graded
    mutation routinely leaves that range).  The sequence search runs on the
    ungraded QP (the grading plays no role in reachability); the graded
    replay then carries the degrees along, and the weight of the resulting
    bare cycle is the weight of the class.
    """
    if qp.degrees is None:
        raise PreconditionError("weight needs a degree map")
    red, seq = _acyclic_reduct(qp, budget)
    base = weight_of_grading(red.quiver, red.degrees)
    return WeightResult(
        weight=base.weight,
        canonical=base.canonical,
        p=base.p,
        q=base.q,
        witness={
            "method": "mutation",
            "sequence": list(seq),
            "pArm": base.witness["pArm"],
            "qArm": base.witness["qArm"],
        },
    )


@dataclass(frozen=True)
class GradingEquivalence:
    """Outcome of comparing two gradings of one quiver.

    Equivalent gradings differ by vertex offsets: ``d1(a) - d2(a) =
    offsets[tgt(a)] - offsets[src(a)]`` for every arrow ``a`` (after first
    transporting ``d2`` along ``automorphism`` when one was used).  For
    inequivalent gradings ``violated_cycle`` is a closed walk, as (arrow
    name, +1/-1) steps, whose signed degree-difference sum is nonzero —
    an obstruction no offsets can repair.
    """

    equivalent: bool
    offsets: dict[int, int] | None = None
    automorphism: tuple[dict[int, int], dict[str, str]] | None = None
    violated_cycle: tuple[tuple[str, int], ...] | None = None


def _offsets_for(
    quiver: Quiver, delta: dict[str, int]
) -> tuple[dict[int, int], None] | tuple[None, tuple[tuple[str, int], ...]]:
    """Solve ``delta(a) = r[tgt] - r[src]`` or return a violated closed walk."""
    offsets: dict[int, int] = {}
    parent: dict[int, tuple[str, int, int]] = {}  # vertex -> (arrow, sign, prev)

    def walk_to_root(v: int) -> list[tuple[str, int]]:
        steps = []
        while v in parent:
            name, sign, prev = parent[v]
            steps.append((name, -sign))
            v = prev
        return steps

    for root in quiver.vertices:
        if root in offsets:
            continue
        offsets[root] = 0
        stack = [root]
        while stack:
            u = stack.pop()
            for a in quiver.arrows_at(u):
                fwd = a.src == u
                other = a.tgt if fwd else a.src
                sign = 1 if fwd else -1
                value = offsets[u] + sign * delta[a.name]
                if other not in offsets:
                    offsets[other] = value
                    parent[other] = (a.name, sign, u)
                    stack.append(other)
                elif offsets[other] != value:
                    # Closed walk: root->u, the arrow, then other->root.
                    up = walk_to_root(u)
                    up.reverse()
                    cycle = [(s, -g) for s, g in up] + [(a.name, sign)]
                    cycle += walk_to_root(other)
                    total = sum(g * delta[s] for s, g in cycle)
                    if total == 0:
                        raise InternalInvariantError(
                            "offset conflict produced a balanced witness walk"
                        )
                    return None, tuple(cycle)
    return offsets, None


def grading_equivalent(
    quiver: Quiver,
    d1: dict[str, int],
    d2: dict[str, int],
    up_to_automorphism: bool = False,
) -> GradingEquivalence:
    """Decide whether two gradings differ by vertex offsets.

    With ``up_to_automorphism`` the second grading may first be transported
    along any automorphism of the (ungraded) quiver; the identity is tried
    first, so plain equivalence is always preferred in the reported witness.
    """
    GradedQP(quiver, None, d1)
    GradedQP(quiver, None, d2)
    identity_witness: tuple[tuple[str, int], ...] | None = None
    if up_to_automorphism:
        autos = quiver_automorphisms(quiver)
    else:
        autos = [
            (
                {v: v for v in quiver.vertices},
                {a.name: a.name for a in quiver.arrows},
            )
        ]
    for k, (vmap, amap) in enumerate(autos):
        transported = {name: d2[amap[name]] for name in amap}
        delta = {name: d1[name] - transported[name] for name in transported}
        offsets, violated = _offsets_for(quiver, delta)
        if offsets is not None:
            is_identity = all(v == w for v, w in vmap.items()) and all(
                a == b for a, b in amap.items()
            )
            return GradingEquivalence(
                True,
                offsets=offsets,
                automorphism=None if is_identity else (vmap, amap),
            )
        if k == 0:
            identity_witness = violated
    return GradingEquivalence(False, violated_cycle=identity_witness)


@dataclass(frozen=True)
class DerivedVerdict:
    """Outcome of a derived-equivalence comparison via acyclic reducts.

    ``left`` and ``right`` describe the two reducts: their kind ("cycle" or
    "tree"), arm totals and canonical weight for cycles, and the mutation
    sequence used.
    """

    equivalent: bool
    left: dict = field(compare=False)
    right: dict = field(compare=False)
    reason: str = ""


def _reduct_summary(qp: GradedQP, budget: int | None) -> dict:
    red, seq = _acyclic_reduct(qp, budget)
    if single_cycle_traversal(red.quiver) is not None:
        w = weight_of_grading(red.quiver, red.degrees)
        return {
            "kind": "cycle",
            "sequence": seq,
            "p": w.p,
            "q": w.q,
            "canonicalWeight": w.canonical,
        }
    if is_tree(red.quiver):
        sym = Quiver(
            red.quiver.vertices,
            [(a.name + "+", a.src, a.tgt) for a in red.quiver.arrows]
            + [(a.name + "-", a.tgt, a.src) for a in red.quiver.arrows],
        )
        return {
            "kind": "tree",
            "sequence": seq,
            "treeKey": canonical_key(sym),
        }
    raise ScopeError(
        "acyclic reduct is neither a tree nor a single cycle; the derived "
        "class of such a quiver is out of scope"
    )


def derived_equivalent(
    a: GradedQP, b: GradedQP, budget: int | None = None
) -> DerivedVerdict:
    """Derived equivalence of two graded class members.

    Both inputs are left-mutated to acyclic quivers.  Cycle-shaped reducts
    compare by arm totals and canonical weight; tree-shaped reducts compare
    by the underlying undirected tree.  Mixing the two kinds violates the
    same-cluster-type precondition and raises :class:`ScopeError`.
    """
    require_w_grading(a)
    require_w_grading(b)
    left = _reduct_summary(a, budget)
    right = _reduct_summary(b, budget)
    if left["kind"] != right["kind"]:
        raise ScopeError(
            "the two inputs have different cluster types "
            f"({left['kind']} vs {right['kind']}); comparison needs matching types"
        )
    if left["kind"] == "tree":
        same = left["treeKey"] == right["treeKey"]
        return DerivedVerdict(
            same,
            left,
            right,
            "same underlying tree" if same else "different underlying trees",
        )
    same = (left["p"], left["q"]) == (right["p"], right["q"]) and left[
        "canonicalWeight"
    ] == right["canonicalWeight"]
    if (left["p"], left["q"]) != (right["p"], right["q"]):
        reason = "different arm totals"
    elif left["canonicalWeight"] != right["canonicalWeight"]:
        reason = "same arm totals but different canonical weights"
    else:
        reason = "same arm totals and canonical weight"
    return DerivedVerdict(same, left, right, reason)


def derived_class_count(p: int, q: int) -> int:
    """Number of derived classes among the gradings for arm lengths (p, q)."""
    if not (p >= q >= 1):
        raise PreconditionError("arm lengths need p >= q >= 1")
    if p == q:
        return p // 2 + 1
    return p // 2 + q // 2 + 1


def weight_bounds(p: int, q: int) -> tuple[int, int]:
    """The attainable signed weights for arm lengths (p, q): a closed range."""
    if not (p >= q >= 1):
        raise PreconditionError("arm lengths need p >= q >= 1")
    return (-(q // 2), p // 2)


def atilde_coxeter_coefficients(p: int, q: int, w: int) -> tuple[int, ...]:
    """Coefficients (constant first) of the Coxeter polynomial
    ``X^(p+q) - (-1)^w X^(p-w) - (-1)^w X^(q+w) + 1`` for arm lengths
    (p, q) and signed weight ``w``."""
    if not (p >= q >= 1):
        raise PreconditionError("arm lengths need p >= q >= 1")
    lo, hi = weight_bounds(p, q)
    if not lo <= w <= hi:
        raise PreconditionError(
            f"weight {w} outside the attainable range [{lo}, {hi}] for (p, q)=({p}, {q})"
        )
    n = p + q
    coeffs = [0] * (n + 1)
    coeffs[0] += 1
    coeffs[n] += 1
    sign = 1 if w % 2 == 0 else -1
    coeffs[p - w] -= sign
    coeffs[q + w] -= sign
    return tuple(coeffs)


@dataclass(frozen=True)
class ARSummary:
    """Counts of exceptional components in the Auslander-Reiten quiver of the
    derived category, determined by the canonical weight.

    Only meaningful for nonzero weight; weight zero means the degree-zero
    algebra is piecewise hereditary and the exceptional-component counts do
    not apply (``applicable`` is False and the counts are None).
    """

    applicable: bool
    components_za_inf_inf: int | None = None
    components_za_inf: int | None = None
    total_exceptional: int | None = None
    note: str | None = None


def ar_summary(weight: int) -> ARSummary:
    """Exceptional Auslander-Reiten component counts for a weight."""
    w = abs(weight)
    if w == 0:
        return ARSummary(
            False,
            note=(
                "weight zero: the algebra is piecewise hereditary and the "
                "exceptional-component counts do not apply"
            ),
        )
    return ARSummary(
        True,
        components_za_inf_inf=w,
        components_za_inf=2 * w,
        total_exceptional=3 * w,
    )
