"""Command-line interface.

Every command reads JSON from a file argument (or ``-`` for stdin) and
writes JSON to stdout (``--output text`` switches to a short human-readable
form).  Exit codes: 0 success, 2 usage errors, 3 domain errors (bad
documents, violated preconditions, out-of-scope input), 4 capacity and
search-budget limits.
"""

from __future__ import annotations

import argparse
import math
import sys
from dataclasses import asdict
from typing import Any

from .algebra import (
    PresentedAlgebra,
    build_overline_qp,
    cartan_matrix,
    coxeter_matrix,
    coxeter_polynomial,
    degree_zero_part,
    global_dimension,
    path_basis,
    projective_dimensions,
)
from .census import classify, enumerate_w_gradings, pin_report
from .core import check_w_grading
from .errors import CapacityError, QPError, SearchBudgetError
from .interchange import (
    algebra_doc_parts,
    degree_map_from_doc,
    loads,
    pretty_json,
    qp_from_doc,
    qp_to_doc,
    quiver_from_doc,
    quiver_to_doc,
    sequence_from_doc,
)
from .invariants import (
    ar_summary,
    derived_equivalent,
    grading_equivalent,
    weight_structural,
    weight_via_mutation,
)
from .mutation import mutate_sequence
from .presets import PRESET_NAMES, preset

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_CAPACITY = 4


def _read_doc(path: str) -> Any:
    if path == "-":
        return loads(sys.stdin.read())
    with open(path, "r", encoding="utf-8") as fh:
        return loads(fh.read())


def _emit(args, doc: Any, text: str) -> int:
    if args.output == "text":
        print(text)
    else:
        sys.stdout.write(pretty_json(doc))
    return EXIT_OK


def _algebra_from_path(path: str) -> PresentedAlgebra:
    quiver, relations = algebra_doc_parts(_read_doc(path))
    return PresentedAlgebra(quiver, relations)


def _cmd_preset(args) -> int:
    if args.name is None:
        return _emit(args, {"presets": list(PRESET_NAMES)}, "\n".join(PRESET_NAMES))
    qp = preset(args.name)
    return _emit(args, qp_to_doc(qp), repr(qp))


def _cmd_mutate(args) -> int:
    doc = _read_doc(args.file)
    if isinstance(doc, dict) and "qp" in doc:
        qp = qp_from_doc(doc["qp"])
        steps = sequence_from_doc(doc.get("sequence", []))
    else:
        qp = qp_from_doc(doc)
        steps = []
    if args.vertex is not None:
        steps.append((args.vertex, args.direction))
    result = mutate_sequence(qp, steps)
    return _emit(
        args,
        qp_to_doc(result),
        f"applied {len(steps)} step(s); "
        f"{len(result.quiver.arrows)} arrows, "
        f"{len(result.potential.terms)} potential term(s)",
    )


def _cmd_weight(args) -> int:
    qp = qp_from_doc(_read_doc(args.file))
    mutation = weight_via_mutation(qp)
    structural = None
    if check_w_grading(qp).ok:
        structural = weight_structural(qp)
        if (structural.p, structural.q, structural.canonical) != (
            mutation.p,
            mutation.q,
            mutation.canonical,
        ):
            raise QPError(
                "the two weight routes disagree: structural "
                f"(p={structural.p}, q={structural.q}, w={structural.canonical}) "
                f"vs mutation (p={mutation.p}, q={mutation.q}, w={mutation.canonical})"
            )
    doc = {
        "weight": mutation.weight,
        "canonicalWeight": mutation.canonical,
        "p": mutation.p,
        "q": mutation.q,
        "structural": None if structural is None else structural.witness,
        "mutation": mutation.witness,
        "arSummary": asdict(ar_summary(mutation.canonical)),
    }
    return _emit(
        args,
        doc,
        f"weight {mutation.weight} (canonical {mutation.canonical}) "
        f"for arm totals p={mutation.p}, q={mutation.q}",
    )


def _cmd_grading_eq(args) -> int:
    doc = _read_doc(args.file)
    if not isinstance(doc, dict) or not {"quiver", "first", "second"} <= set(doc):
        raise QPError(
            "grading-eq expects an object with keys 'quiver', 'first', 'second'"
        )
    quiver, _ = quiver_from_doc(doc["quiver"])
    d1 = degree_map_from_doc(doc["first"], quiver, where="first")
    d2 = degree_map_from_doc(doc["second"], quiver, where="second")
    verdict = grading_equivalent(
        quiver, d1, d2, up_to_automorphism=args.up_to_automorphism
    )
    out: dict[str, Any] = {"equivalent": verdict.equivalent}
    if verdict.offsets is not None:
        out["offsets"] = {str(v): r for v, r in sorted(verdict.offsets.items())}
    if verdict.automorphism is not None:
        vmap, amap = verdict.automorphism
        out["automorphism"] = {
            "vertices": {str(v): w for v, w in sorted(vmap.items())},
            "arrows": dict(sorted(amap.items())),
        }
    if verdict.violated_cycle is not None:
        out["violatedCycle"] = [
            {"arrow": name, "sign": sign} for name, sign in verdict.violated_cycle
        ]
    return _emit(
        args,
        out,
        "equivalent" if verdict.equivalent else "not equivalent",
    )


def _cmd_derived_eq(args) -> int:
    doc = _read_doc(args.file)
    if not isinstance(doc, dict) or not {"first", "second"} <= set(doc):
        raise QPError("derived-eq expects an object with keys 'first' and 'second'")
    first = qp_from_doc(doc["first"])
    second = qp_from_doc(doc["second"])
    verdict = derived_equivalent(first, second)
    left = dict(verdict.left)
    right = dict(verdict.right)
    left.pop("treeKey", None)
    right.pop("treeKey", None)
    out = {
        "equivalent": verdict.equivalent,
        "reason": verdict.reason,
        "first": left,
        "second": right,
    }
    return _emit(
        args,
        out,
        ("equivalent: " if verdict.equivalent else "not equivalent: ")
        + verdict.reason,
    )


def _cmd_coxeter(args) -> int:
    algebra = _algebra_from_path(args.file)
    coeffs = coxeter_polynomial(algebra)
    doc = {
        "coefficients": list(coeffs),
        "cartan": cartan_matrix(algebra),
        "coxeterMatrix": coxeter_matrix(algebra),
    }
    return _emit(
        args,
        doc,
        "coefficients (constant first): " + " ".join(str(c) for c in coeffs),
    )


def _cmd_gldim(args) -> int:
    algebra = _algebra_from_path(args.file)
    pds = projective_dimensions(algebra)
    gd = global_dimension(algebra)
    finite = gd != math.inf
    doc = {
        "globalDimension": int(gd) if finite else None,
        "finite": finite,
        "projectiveDimensions": {
            str(v): (int(d) if d != math.inf else None) for v, d in sorted(pds.items())
        },
    }
    return _emit(
        args,
        doc,
        f"global dimension {int(gd) if finite else 'infinite'}",
    )


def _cmd_overline(args) -> int:
    algebra = _algebra_from_path(args.file)
    qp = build_overline_qp(algebra)
    return _emit(
        args,
        qp_to_doc(qp),
        f"{len(qp.quiver.arrows)} arrows, {len(qp.potential.terms)} potential term(s)",
    )


def _cmd_degree_zero(args) -> int:
    qp = qp_from_doc(_read_doc(args.file))
    algebra = degree_zero_part(qp)
    basis = path_basis(algebra)
    doc = {
        "quiver": quiver_to_doc(algebra.quiver),
        "relations": [list(rel) for rel in algebra.relations],
        "dimension": basis.dimension,
    }
    return _emit(
        args,
        doc,
        f"{len(algebra.quiver.arrows)} arrows, {len(algebra.relations)} "
        f"relation(s), dimension {basis.dimension}",
    )


def _cmd_enumerate(args) -> int:
    qp = qp_from_doc(_read_doc(args.file))
    potential = None if qp.potential.is_zero else qp.potential
    gradings = enumerate_w_gradings(
        qp.quiver, potential, up_to_iso=not args.all
    )
    doc = {
        "count": len(gradings),
        "gradings": [dict(sorted(d.items())) for d in gradings],
    }
    return _emit(args, doc, f"{len(gradings)} grading(s)")


def _cmd_classify(args) -> int:
    report = classify(args.p, args.q)
    if args.pin is not None:
        path = pin_report(report, args.pin)
        report.doc.setdefault("pinnedTo", str(path))
    sizes = ", ".join(
        f"weight {c['canonicalWeight']}: {c['size']}" for c in report.doc["classes"]
    )
    return _emit(
        args,
        report.doc,
        f"{report.quiver_count} quiver(s), {report.algebra_count} graded "
        f"algebra(s), classes: {sizes}",
    )


def _cmd_serve(args) -> int:
    from .service import serve

    serve(
        host=args.host,
        port=args.port,
        persist_dir=args.persist,
        allow_origin=args.allow_origin,
    )
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qpmut",
        description="Graded quivers with potential: mutation, weights, census.",
    )
    parser.add_argument(
        "--output",
        choices=("json", "text"),
        default="json",
        help="output format (default: json)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("preset", help="print a built-in example QP (or list them)")
    sp.add_argument("name", nargs="?", help="preset name; omit to list")
    sp.set_defaults(func=_cmd_preset)

    sp = sub.add_parser("mutate", help="apply mutation steps to a QP document")
    sp.add_argument("file", help="QP document, or {'qp':..., 'sequence':...}; - for stdin")
    sp.add_argument("--vertex", type=int, default=None, help="mutate at this vertex")
    sp.add_argument(
        "--direction",
        choices=("left", "right", "plain"),
        default="left",
        help="direction for --vertex (default: left)",
    )
    sp.set_defaults(func=_cmd_mutate)

    sp = sub.add_parser("weight", help="weight of a graded QP by both routes")
    sp.add_argument("file", help="QP document with degrees; - for stdin")
    sp.set_defaults(func=_cmd_weight)

    sp = sub.add_parser("grading-eq", help="compare two gradings of one quiver")
    sp.add_argument("file", help="{'quiver':..., 'first':..., 'second':...}")
    sp.add_argument(
        "--up-to-automorphism",
        action="store_true",
        help="also try transporting along quiver automorphisms",
    )
    sp.set_defaults(func=_cmd_grading_eq)

    sp = sub.add_parser("derived-eq", help="derived equivalence of two graded QPs")
    sp.add_argument("file", help="{'first': QP doc, 'second': QP doc}")
    sp.set_defaults(func=_cmd_derived_eq)

    sp = sub.add_parser("coxeter", help="Coxeter data of a presented algebra")
    sp.add_argument("file", help="{'quiver':..., 'relations': [[x,y],...]}")
    sp.set_defaults(func=_cmd_coxeter)

    sp = sub.add_parser("gldim", help="global dimension of a presented algebra")
    sp.add_argument("file", help="{'quiver':..., 'relations': [[x,y],...]}")
    sp.set_defaults(func=_cmd_gldim)

    sp = sub.add_parser(
        "overline", help="wrap an algebra into a graded QP (inverse of degree-zero)"
    )
    sp.add_argument("file", help="{'quiver':..., 'relations': [[x,y],...]}")
    sp.set_defaults(func=_cmd_overline)

    sp = sub.add_parser("degree-zero", help="degree-zero algebra of a graded QP")
    sp.add_argument("file", help="QP document with degrees; - for stdin")
    sp.set_defaults(func=_cmd_degree_zero)

    sp = sub.add_parser("enumerate", help="all W-gradings of a QP's quiver")
    sp.add_argument("file", help="QP document (degrees ignored); - for stdin")
    sp.add_argument(
        "--all",
        action="store_true",
        help="list raw gradings instead of one per isomorphism class",
    )
    sp.set_defaults(func=_cmd_enumerate)

    sp = sub.add_parser("classify", help="full census for arm totals (p, q)")
    sp.add_argument("p", type=int)
    sp.add_argument("q", type=int)
    sp.add_argument(
        "--pin",
        metavar="DIR",
        default=None,
        help="write (or verify) the pinned report under DIR",
    )
    sp.set_defaults(func=_cmd_classify)

    sp = sub.add_parser("serve", help="run the HTTP session service")
    sp.add_argument("--host", default="127.0.0.1")
    sp.add_argument("--port", type=int, default=8797)
    sp.add_argument("--persist", metavar="DIR", default=None)
    sp.add_argument("--allow-origin", default=None, metavar="ORIGIN")
    sp.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CapacityError, SearchBudgetError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except QPError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
