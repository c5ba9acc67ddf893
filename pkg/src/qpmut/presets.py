"""Ready-made quivers and graded QPs used by the CLI, the service, and tests.

Each preset is a small, named example: the linear quivers, the acyclic
cycle quivers with ``p`` arrows one way and ``q`` the other, the four
quivers of the (2, 2) mutation class with interesting gradings, a five-vertex
example whose two gradings agree on every cycle yet are inequivalent, and a
four-vertex graded QP whose degree-zero part has global dimension 3.
"""

from __future__ import annotations

from .core import Arrow, GradedQP, Potential, Quiver
from .errors import PreconditionError


def linear_quiver(n: int) -> Quiver:
    """The equioriented line 1 -> 2 -> ... -> n."""
    if n < 1:
        raise PreconditionError("linear quiver needs at least one vertex")
    return Quiver(
        range(1, n + 1),
        [Arrow(f"a{i}", i, i + 1) for i in range(1, n)],
    )


def cycle_quiver(p: int, q: int) -> Quiver:
    """The acyclic quiver on one underlying cycle with ``p`` arrows running
    clockwise and ``q`` counterclockwise (``p >= q >= 1``).

    Vertices are 1..p+q.  Arrows ``a1..ap`` run i -> i+1 along 1..p+1; arrows
    ``b1..bq`` run back along the complementary side, oriented so that the
    whole quiver is acyclic: ``bj: p+j+1 -> p+j`` for j < q and
    ``bq: 1 -> p+q``.
    """
    if not (p >= q >= 1):
        raise PreconditionError("cycle quiver needs p >= q >= 1")
    n = p + q
    arrows = [Arrow(f"a{i}", i, i + 1) for i in range(1, p + 1)]
    for j in range(1, q):
        arrows.append(Arrow(f"b{j}", p + j + 1, p + j))
    arrows.append(Arrow(f"b{q}", 1, n))
    return Quiver(range(1, n + 1), arrows)


def cycle_qp(p: int, q: int) -> GradedQP:
    """`cycle_quiver(p, q)` with zero potential and all degrees zero."""
    quiver = cycle_quiver(p, q)
    return GradedQP(quiver, Potential.zero(), {a.name: 0 for a in quiver.arrows})


def _four_cycle_alternating() -> Quiver:
    # 1 -> 2 <- 3 -> 4 <- 1: both paths of length two, sources 1 and 3.
    return Quiver(
        range(1, 5),
        [
            Arrow("a", 1, 2),
            Arrow("b", 3, 2),
            Arrow("c", 3, 4),
            Arrow("d", 1, 4),
        ],
    )


def _one_triangle() -> GradedQP:
    quiver = Quiver(
        range(1, 5),
        [
            Arrow("e", 1, 2),
            Arrow("f", 2, 3),
            Arrow("c", 1, 3),
            Arrow("g", 3, 4),
            Arrow("h", 4, 1),
        ],
    )
    potential = Potential([(1, ("c", "g", "h"))])
    degrees = {"e": 0, "f": 0, "c": 1, "g": 0, "h": 0}
    return GradedQP(quiver, potential, degrees)


def _two_triangles() -> GradedQP:
    quiver = Quiver(
        range(1, 5),
        [
            Arrow("c1", 1, 3),
            Arrow("c2", 1, 3),
            Arrow("gamma", 3, 2),
            Arrow("delta", 2, 1),
            Arrow("eps", 3, 4),
            Arrow("zeta", 4, 1),
        ],
    )
    potential = Potential([(1, ("c1", "gamma", "delta")), (1, ("c2", "eps", "zeta"))])
    degrees = {"c1": 1, "c2": 0, "gamma": 0, "delta": 0, "eps": 1, "zeta": 0}
    return GradedQP(quiver, potential, degrees)


def inequivalent_gradings_qp() -> GradedQP:
    """A five-vertex graded QP admitting a second grading with the same
    degree sum around every cycle that is still not equivalent to this one,
    not even after relabelling by a quiver automorphism.  The companion
    grading arises by mutating left at 2, 5, 4, 1, 2 in that order.
    """
    quiver = Quiver(
        range(1, 6),
        [
            Arrow("alpha", 1, 2),
            Arrow("beta", 2, 3),
            Arrow("gamma", 3, 1),
            Arrow("delta", 4, 3),
            Arrow("epsilon", 5, 3),
            Arrow("zeta", 5, 4),
            Arrow("rho", 3, 1),
        ],
    )
    potential = Potential([(1, ("alpha", "beta", "rho"))])
    degrees = {
        "alpha": 0,
        "beta": 0,
        "gamma": 0,
        "delta": 0,
        "epsilon": 0,
        "zeta": 0,
        "rho": 1,
    }
    return GradedQP(quiver, potential, degrees)


def gldim_three_qp() -> GradedQP:
    """A graded QP on two glued 3-cycles whose degree-zero part is a linear
    quiver with two overlapping relations, hence of global dimension 3."""
    quiver = Quiver(
        range(1, 5),
        [
            Arrow("a", 1, 2),
            Arrow("b", 2, 4),
            Arrow("ap", 1, 3),
            Arrow("bp", 3, 4),
            Arrow("c", 4, 1),
        ],
    )
    potential = Potential([(1, ("a", "b", "c")), (1, ("ap", "bp", "c"))])
    degrees = {"a": 0, "b": 1, "ap": 1, "bp": 0, "c": 0}
    return GradedQP(quiver, potential, degrees)


def _zero_graded(quiver: Quiver) -> GradedQP:
    return GradedQP(quiver, Potential.zero(), {a.name: 0 for a in quiver.arrows})


def _build_preset(name: str) -> GradedQP:
    if name == "inequivalent-gradings":
        return inequivalent_gradings_qp()
    if name == "gldim-three":
        return gldim_three_qp()
    if name == "atilde-2-2-alternating":
        return _zero_graded(_four_cycle_alternating())
    if name == "atilde-2-2-one-triangle":
        return _one_triangle()
    if name == "atilde-2-2-two-triangles":
        return _two_triangles()
    parts = name.split("-")
    if len(parts) == 4 and parts[0] == "atilde" and parts[3] == "acyclic":
        try:
            p, q = int(parts[1]), int(parts[2])
        except ValueError:
            raise PreconditionError(f"unknown preset {name!r}") from None
        return cycle_qp(p, q)
    raise PreconditionError(f"unknown preset {name!r}")


PRESET_NAMES: tuple[str, ...] = (
    "atilde-2-2-acyclic",
    "atilde-2-2-alternating",
    "atilde-2-2-one-triangle",
    "atilde-2-2-two-triangles",
    "atilde-3-2-acyclic",
    "atilde-3-3-acyclic",
    "atilde-4-3-acyclic",
    "gldim-three",
    "inequivalent-gradings",
)


def preset(name: str) -> GradedQP:
    """Look up a preset by name.  ``atilde-P-Q-acyclic`` works for any
    ``P >= Q >= 1``, not just the names advertised in ``PRESET_NAMES``."""
    return _build_preset(name)
