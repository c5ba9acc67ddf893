"""JSON interchange for QPs, degree maps, algebras and mutation sequences.

The serialized form of a QP is::

    {"vertices": [1, 2, 3],
     "arrows": [{"id": "a", "src": 1, "tgt": 2, "deg": 0}, ...],
     "potential": [{"coeff": "1", "cycle": ["a", "b", "c"]}, ...]}

Coefficients are exact rationals as strings ("3", "-1/2"); cycles list arrow
ids in traversal order.  ``deg`` is present on every arrow or on none.  An
algebra document is ``{"quiver": {...}, "relations": [["a","b"], ...]}`` where
a relation ``["a","b"]`` declares the path "a then b" to be zero.  Mutation
sequences are ``[{"vertex": 2, "direction": "left"}, ...]`` applied first
entry first.

Serialization is canonical: given equal objects the emitted bytes are equal,
with vertices ascending, arrows sorted by id, potential terms sorted by their
canonical cycle, and stable key order inside every JSON object.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .core import Arrow, CyclicWord, GradedQP, Potential, Quiver, validate_path
from .errors import ParseError

DIRECTIONS = ("left", "right", "plain")


def _expect(cond: bool, where: str, message: str) -> None:
    if not cond:
        raise ParseError(f"{where}: {message}")


def _parse_coeff(raw: Any, where: str) -> Fraction:
    if isinstance(raw, bool):
        raise ParseError(f"{where}: coefficient must be a rational string or integer")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"{where}: bad rational {raw!r} ({exc})") from None
    raise ParseError(f"{where}: coefficient must be a rational string or integer")


def quiver_from_doc(doc: Any, where: str = "quiver") -> tuple[Quiver, dict[str, int] | None]:
    """Parse the quiver part of a document; returns (quiver, degrees or None)."""
    _expect(isinstance(doc, dict), where, "expected an object")
    _expect("vertices" in doc, where, "missing key 'vertices'")
    _expect("arrows" in doc, where, "missing key 'arrows'")
    raw_vs = doc["vertices"]
    _expect(isinstance(raw_vs, list) and raw_vs, f"{where}.vertices", "expected a nonempty list")
    vertices = []
    for i, v in enumerate(raw_vs):
        _expect(isinstance(v, int) and not isinstance(v, bool), f"{where}.vertices[{i}]", "expected an integer")
        vertices.append(v)
    _expect(len(set(vertices)) == len(vertices), f"{where}.vertices", "duplicate vertex")
    raw_arrows = doc["arrows"]
    _expect(isinstance(raw_arrows, list), f"{where}.arrows", "expected a list")
    arrows: list[Arrow] = []
    degrees: dict[str, int] = {}
    seen = set()
    degree_flags = set()
    vset = set(vertices)
    for i, ra in enumerate(raw_arrows):
        loc = f"{where}.arrows[{i}]"
        _expect(isinstance(ra, dict), loc, "expected an object")
        for k in ("id", "src", "tgt"):
            _expect(k in ra, loc, f"missing key '{k}'")
        name = ra["id"]
        _expect(isinstance(name, str) and name, f"{loc}.id", "expected a nonempty string")
        _expect(name not in seen, f"{loc}.id", f"duplicate arrow id {name!r}")
        seen.add(name)
        for k in ("src", "tgt"):
            v = ra[k]
            _expect(isinstance(v, int) and not isinstance(v, bool), f"{loc}.{k}", "expected an integer")
            _expect(v in vset, f"{loc}.{k}", f"vertex {v} not in vertex set")
        arrows.append(Arrow(name, ra["src"], ra["tgt"]))
        if "deg" in ra:
            d = ra["deg"]
            _expect(isinstance(d, int) and not isinstance(d, bool), f"{loc}.deg", "expected an integer")
            degrees[name] = d
            degree_flags.add(True)
        else:
            degree_flags.add(False)
    _expect(len(degree_flags) <= 1, f"{where}.arrows", "every arrow must carry 'deg' or none may")
    graded = degree_flags == {True}
    return Quiver(vertices, arrows), (degrees if graded else None)


def qp_from_doc(doc: Any) -> GradedQP:
    """Parse a full QP document into a GradedQP (positioned errors)."""
    quiver, degrees = quiver_from_doc(doc, where="qp")
    raw_pot = doc.get("potential", [])
    _expect(isinstance(raw_pot, list), "qp.potential", "expected a list")
    terms: list[tuple[Fraction, CyclicWord]] = []
    for i, rt in enumerate(raw_pot):
        loc = f"qp.potential[{i}]"
        _expect(isinstance(rt, dict), loc, "expected an object")
        _expect("coeff" in rt and "cycle" in rt, loc, "missing 'coeff' or 'cycle'")
        coeff = _parse_coeff(rt["coeff"], f"{loc}.coeff")
        cyc = rt["cycle"]
        _expect(isinstance(cyc, list) and cyc, f"{loc}.cycle", "expected a nonempty list")
        for j, nm in enumerate(cyc):
            _expect(isinstance(nm, str), f"{loc}.cycle[{j}]", "expected an arrow id string")
            _expect(quiver.has_arrow(nm), f"{loc}.cycle[{j}]", f"unknown arrow {nm!r}")
        for j, nm in enumerate(cyc):
            nxt = cyc[(j + 1) % len(cyc)]
            _expect(
                quiver.arrow(nm).tgt == quiver.arrow(nxt).src,
                f"{loc}.cycle",
                f"arrows {nm!r} (position {j}) and {nxt!r} are not composable",
            )
        terms.append((coeff, CyclicWord(cyc)))
    potential = Potential(terms)
    homogeneous = False
    if degrees is not None:
        homogeneous = all(sum(degrees[x] for x in w.arrows) == 1 for _, w in potential.terms)
    return GradedQP(quiver, potential, degrees, homogeneous=homogeneous and degrees is not None)


def _coeff_str(c: Fraction) -> str:
    return str(c)


def qp_to_doc(qp: GradedQP) -> dict:
    arrows = []
    for a in qp.quiver.arrows:
        entry: dict[str, Any] = {"id": a.name, "src": a.src, "tgt": a.tgt}
        if qp.degrees is not None:
            entry["deg"] = qp.degrees[a.name]
        arrows.append(entry)
    return {
        "vertices": list(qp.quiver.vertices),
        "arrows": arrows,
        "potential": [
            {"coeff": _coeff_str(c), "cycle": list(w.arrows)} for c, w in qp.potential.terms
        ],
    }


def degree_map_from_doc(doc: Any, quiver: Quiver, where: str = "degrees") -> dict[str, int]:
    _expect(isinstance(doc, dict), where, "expected an object mapping arrow ids to integers")
    out: dict[str, int] = {}
    for k, v in doc.items():
        _expect(isinstance(k, str), where, "keys must be arrow ids")
        _expect(quiver.has_arrow(k), f"{where}.{k}", "unknown arrow")
        _expect(isinstance(v, int) and not isinstance(v, bool), f"{where}.{k}", "expected an integer")
        out[k] = v
    missing = [a.name for a in quiver.arrows if a.name not in out]
    _expect(not missing, where, f"missing arrows: {', '.join(missing)}")
    return out


def sequence_from_doc(doc: Any, where: str = "sequence") -> list[tuple[int, str]]:
    _expect(isinstance(doc, list), where, "expected a list of mutation steps")
    steps: list[tuple[int, str]] = []
    for i, rs in enumerate(doc):
        loc = f"{where}[{i}]"
        _expect(isinstance(rs, dict), loc, "expected an object")
        _expect("vertex" in rs, loc, "missing 'vertex'")
        v = rs["vertex"]
        _expect(isinstance(v, int) and not isinstance(v, bool), f"{loc}.vertex", "expected an integer")
        d = rs.get("direction", "left")
        _expect(d in DIRECTIONS, f"{loc}.direction", f"expected one of {', '.join(DIRECTIONS)}")
        steps.append((v, d))
    return steps


def sequence_to_doc(steps: list[tuple[int, str]]) -> list[dict]:
    return [{"vertex": v, "direction": d} for v, d in steps]


def algebra_doc_parts(doc: Any) -> tuple[Quiver, list[tuple[str, str]]]:
    """Parse an algebra document: quiver plus quadratic monomial relations."""
    _expect(isinstance(doc, dict), "algebra", "expected an object")
    _expect("quiver" in doc, "algebra", "missing key 'quiver'")
    quiver, degrees = quiver_from_doc(doc["quiver"], where="algebra.quiver")
    _expect(degrees is None, "algebra.quiver", "algebra quivers carry no degrees")
    raw_rel = doc.get("relations", [])
    _expect(isinstance(raw_rel, list), "algebra.relations", "expected a list")
    relations: list[tuple[str, str]] = []
    for i, rr in enumerate(raw_rel):
        loc = f"algebra.relations[{i}]"
        _expect(isinstance(rr, list) and len(rr) == 2, loc, "expected a pair [first, second]")
        a, b = rr
        _expect(isinstance(a, str) and isinstance(b, str), loc, "expected arrow id strings")
        validate_path(quiver, (a, b), where=loc)
        relations.append((a, b))
    return quiver, relations


def quiver_to_doc(quiver: Quiver, degrees: dict[str, int] | None = None) -> dict:
    arrows = []
    for a in quiver.arrows:
        entry: dict[str, Any] = {"id": a.name, "src": a.src, "tgt": a.tgt}
        if degrees is not None:
            entry["deg"] = degrees[a.name]
        arrows.append(entry)
    return {"vertices": list(quiver.vertices), "arrows": arrows}


def canonical_json(obj: Any) -> str:
    """Stable compact serialization: equal objects give equal bytes."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True)


def pretty_json(obj: Any) -> str:
    """Stable indented serialization for pinned reports and CLI output."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=True) + "\n"


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
