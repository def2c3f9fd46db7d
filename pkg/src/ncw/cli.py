"""Command-line interface.

    ncw <command> --input <file> [flags]

Commands: validate, connection, curvature, solve, brackets, classify,
extend, gauge.  Exit codes: 0 success (and verdict true for check
commands), 1 verdict false, 2 input error.  Reports go to stdout as text or
as schema-versioned JSON with --format json.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from .dsl import (
    BuiltStructure,
    ParseError,
    build_structure,
    parse_expression,
    parse_field,
    parse_one_form,
    parse_structure,
)
from .extensions import (
    CocycleError,
    ExtendedElement,
    ExtensionError,
    boost_for_coriolis,
    cocycle_triviality,
    extended_cor_bracket,
    extended_mil_bracket,
    gal_extension_cocycle,
    galilei_f_solve,
    milne_f_split,
    noncentrality_check,
)
from .gauge import GaugeElement, infinitesimal_gauge, nc_projection_invariance_check
from .poly import Poly
from .report import (
    Report,
    basis_payload,
    connection_entries,
    constants_payload,
    curvature_entries,
    emit_report,
    field_components,
    generator_label,
)
from .solver import (
    NotInFlavorError,
    canonical_flavor,
    classify,
    solve_symmetries,
    structure_constants,
    verify_coriolis_identity,
)
from .structures import StructureError
from .tensors import TensorField, check_newtonian, curvature


class VerdictFalse(Exception):
    """Raised by command handlers when a check command's verdict is false."""


def _parse_point(text: str, dimension: int) -> list:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != dimension:
        raise StructureError(
            f"sample point needs {dimension} comma-separated rationals, got {len(parts)}"
        )
    try:
        return [Fraction(p) for p in parts]
    except (ValueError, ZeroDivisionError) as exc:
        raise StructureError(f"bad sample point {text!r}: {exc}") from None


def _structure_summary(built: BuiltStructure) -> dict:
    doc = built.doc
    out = {"n": doc.n}
    if doc.name:
        out["name"] = doc.name
    if doc.preset:
        out["preset"] = doc.preset
    if doc.phi is not None:
        out["phi"] = str(parse_expression(doc.phi, doc.n + 1))
    out["shape"] = doc.data_shape()
    return out


def _require_ncb(built: BuiltStructure, command: str):
    if built.ncb is None:
        raise StructureError(
            f"{command} needs gauge or observer data (or a preset); explicit "
            "connection documents do not determine a unit field"
        )
    return built.ncb


def cmd_validate(built: BuiltStructure, args, report: Report) -> None:
    checks = []
    points = [_parse_point(p, built.nc.base.dimension) for p in args.sample_point]

    def run(name, fn):
        try:
            fn()
            checks.append({"name": name, "passed": True})
        except StructureError as exc:
            checks.append({"name": name, "passed": False, "detail": str(exc)})

    run("metric-pair", lambda: built.nc.base.validate(points))
    run("connection-compatibility-and-symmetry", lambda: built.nc.validate())
    if built.ncb is not None:
        run("gauge-presentation", lambda: built.ncb.validate())
    report.results["checks"] = checks
    report.results["passed"] = all(c["passed"] for c in checks)
    if not report.results["passed"]:
        raise VerdictFalse


def cmd_connection(built: BuiltStructure, args, report: Report) -> None:
    ncb = _require_ncb(built, "connection")
    from .structures import geodesic_connection

    ug = geodesic_connection(ncb.base, ncb.u)
    conn = ncb.induced_connection()
    report.results["geodesic_part"] = connection_entries(ug)
    report.results["force_form"] = [
        {"index": [a, b], "value": str(ncb.force.comp(a, b))}
        for a in range(ncb.base.dimension)
        for b in range(ncb.base.dimension)
        if not ncb.force.comp(a, b).is_zero
    ]
    report.results["components"] = connection_entries(conn)


def cmd_curvature(built: BuiltStructure, args, report: Report) -> None:
    r = curvature(built.nc.connection)
    ok, witness = check_newtonian(r, built.nc.base.gamma)
    report.results["nonzero"] = curvature_entries(r)
    report.results["newtonian"] = ok
    report.results["witness"] = list(witness) if witness else None
    if not ok:
        raise VerdictFalse


def cmd_solve(built: BuiltStructure, args, report: Report) -> None:
    basis = solve_symmetries(built.nc, args.flavor, args.degree)
    report.flags["flavor"] = basis.flavor
    report.flags["degree"] = args.degree
    report.results.update(basis_payload(basis))
    report.results["dimension"] = basis.dimension


def cmd_brackets(built: BuiltStructure, args, report: Report) -> None:
    basis = solve_symmetries(built.nc, args.flavor, args.degree)
    constants, closed = structure_constants(basis)
    report.flags["flavor"] = basis.flavor
    report.flags["degree"] = args.degree
    report.results["dimension"] = basis.dimension
    report.results["labels"] = [generator_label(f) for f in basis.fields]
    report.results["closed"] = closed
    report.results["structure_constants"] = constants_payload(constants)


def cmd_classify(built: BuiltStructure, args, report: Report) -> None:
    x = parse_field(args.field, built.nc.base.dimension)
    flags = classify(x, built.nc)
    report.flags["field"] = field_components(x)
    report.results["is_coriolis"] = flags.is_coriolis
    report.results["is_milne"] = flags.is_milne
    report.results["is_galilei"] = flags.is_galilei
    if flags.is_coriolis:
        report.results["raised_transport_identity"] = verify_coriolis_identity(
            x, built.nc
        )


def cmd_extend(built: BuiltStructure, args, report: Report) -> None:
    ncb = _require_ncb(built, "extend")
    flavor = canonical_flavor(args.flavor)
    basis = solve_symmetries(built.nc, flavor, args.degree)
    report.flags["flavor"] = flavor
    report.flags["degree"] = args.degree
    report.results.update(basis_payload(basis))
    dim = ncb.base.dimension
    zero = Poly.zero(dim)
    if flavor == "coriolis":
        report.results["boost_forms"] = [
            field_components(boost_for_coriolis(f, ncb)) for f in basis.fields
        ]
        sample = [
            extended_cor_bracket(
                ExtendedElement(basis.fields[i], zero),
                ExtendedElement(basis.fields[j], zero),
                ncb,
            )
            for i in range(len(basis.fields))
            for j in range(i + 1, len(basis.fields))
        ]
        report.results["bracket_table"] = [
            {"x": field_components(e.x), "parameter": str(e.f)} for e in sample
        ]
        report.results["extension"] = "semidirect by scalar functions"
    elif flavor == "milne":
        splits = []
        for f in basis.fields:
            fx, ok = milne_f_split(f, ncb)
            splits.append({"f": str(fx), "solvable": ok})
        report.results["parameter_splits"] = splits
        table = []
        for i in range(len(basis.fields)):
            for j in range(i + 1, len(basis.fields)):
                out = extended_mil_bracket(
                    ExtendedElement(basis.fields[i], zero),
                    ExtendedElement(basis.fields[j], zero),
                    ncb,
                )
                table.append(
                    {"pair": [i, j], "x": field_components(out.x), "parameter": str(out.f)}
                )
        report.results["bracket_table"] = table
        noncentral, witness = noncentrality_check(ncb, args.degree)
        report.results["noncentral"] = noncentral
        if witness:
            report.results["noncentrality_witness"] = {
                "basis_index": witness[0],
                "parameter_output": str(witness[1]),
            }
        report.results["extension"] = (
            "non-central by time functions" if noncentral else "central"
        )
    else:
        solves = []
        for f in basis.fields:
            fx, ok = galilei_f_solve(f, ncb)
            solves.append({"f": str(fx), "consistent": ok})
        report.results["parameter_solves"] = solves
        cocycle = gal_extension_cocycle(basis, ncb)
        report.results["cocycle"] = [[str(v) for v in row] for row in cocycle]
        result = cocycle_triviality(basis, cocycle)
        verdict = "TRIVIAL" if result.trivial else "NONTRIVIAL"
        report.results["central_extension"] = verdict
        if result.trivial:
            report.results["coboundary_witness"] = [str(v) for v in result.witness]
        else:
            report.results["inconsistency_certificate"] = {
                "pairs": [list(p) for p in result.pairs],
                "combination": [str(v) for v in result.certificate],
            }


def cmd_gauge(built: BuiltStructure, args, report: Report) -> None:
    ncb = _require_ncb(built, "gauge")
    dim = ncb.base.dimension
    x = (
        parse_field(args.x, dim)
        if args.x
        else TensorField.zero(dim, 1, 0)
    )
    psi = (
        parse_one_form(args.psi, dim)
        if args.psi
        else TensorField.zero(dim, 0, 1)
    )
    f = parse_expression(args.f, dim) if args.f else Poly.zero(dim)
    variation = infinitesimal_gauge(ncb, GaugeElement(x, psi, f))
    report.flags["x"] = field_components(x)
    report.flags["psi"] = field_components(psi)
    report.flags["f"] = str(f)
    report.results["variation"] = {
        "gamma": field_components(variation.d_gamma),
        "theta": field_components(variation.d_theta),
        "U": field_components(variation.d_u),
        "V": field_components(variation.d_v),
        "phi": str(variation.d_phi),
    }
    invariant = nc_projection_invariance_check(ncb, psi, f)
    report.results["nc_projection_invariant"] = invariant
    if not invariant:
        raise VerdictFalse


COMMANDS = {
    "validate": cmd_validate,
    "connection": cmd_connection,
    "curvature": cmd_curvature,
    "solve": cmd_solve,
    "brackets": cmd_brackets,
    "classify": cmd_classify,
    "extend": cmd_extend,
    "gauge": cmd_gauge,
}


def _degree(text: str) -> int:
    value = int(text)
    if not 0 <= value <= 12:
        raise argparse.ArgumentTypeError("degree bound must be in 0..12")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncw",
        description="Exact workbench for Newton-Cartan structures and their "
        "Galilean symmetry algebras",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--input", required=True, help="structure file")
        p.add_argument(
            "--format",
            choices=["text", "json"],
            default="text",
            help="report format (default text)",
        )

    val = sub.add_parser("validate", help="check structure invariants")
    common(val)
    val.add_argument(
        "--sample-point",
        action="append",
        default=[],
        metavar="t,x1,..",
        help="extra rational point for the rank/positivity checks "
        "(repeatable; spell negatives as --sample-point=-1,0)",
    )
    common(sub.add_parser("connection", help="build the induced connection"))
    common(sub.add_parser("curvature", help="curvature and its symmetry check"))

    solve_p = sub.add_parser("solve", help="solve a symmetry algebra")
    common(solve_p)
    solve_p.add_argument("--flavor", required=True, help="cor | mil | gal")
    solve_p.add_argument("--degree", type=_degree, required=True)

    br = sub.add_parser("brackets", help="structure constants of a solved basis")
    common(br)
    br.add_argument("--flavor", required=True)
    br.add_argument("--degree", type=_degree, required=True)

    cl = sub.add_parser("classify", help="flavor membership of a field")
    common(cl)
    cl.add_argument(
        "--field", required=True, help="component assignments, e.g. 'X[1] = t^2'"
    )

    ex = sub.add_parser("extend", help="extended algebra, brackets, cocycle verdict")
    common(ex)
    ex.add_argument("--flavor", required=True)
    ex.add_argument("--degree", type=_degree, default=1)

    ga = sub.add_parser("gauge", help="infinitesimal variation and invariance check")
    common(ga)
    ga.add_argument("--x", default="", help="vector field, e.g. 'X[1] = t'")
    ga.add_argument("--psi", default="", help="boost 1-form, e.g. 'psi[1] = 1'")
    ga.add_argument("--f", default="", help="scalar gauge expression")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    report = Report(command=args.command)
    # check commands report invariant violations as verdicts, not input errors
    validate_upfront = args.command not in ("validate", "curvature")
    try:
        doc = parse_structure(text)
        built = build_structure(doc, validate=validate_upfront)
        report.structure = _structure_summary(built)
        COMMANDS[args.command](built, args, report)
    except VerdictFalse:
        print(emit_report(report, args.format == "json"), end="")
        return 1
    except (ParseError, StructureError, NotInFlavorError, ExtensionError,
            CocycleError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    print(emit_report(report, args.format == "json"), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
