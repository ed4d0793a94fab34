"""Command-line interface.

One subcommand per pipeline stage plus the composite ``certify``.  Exit
codes: 0 when everything passed, 2 when a bound identity or a verification
check failed, 1 on operational errors (bad input, stage failure).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Optional

from .catalog import catalog, catalog_names
from .certify import CertifyOptions, StageError, certify, emit_report
from .graphs import Graph, build_two_point_graph
from .orthorep import extract_ortho_rep, verify_ortho_rep
from .independence import independence_number
from .serialize import (
    ParseError,
    dumps_canonical,
    emit_graph,
    event_graph_to_jsonable,
    format_float,
    orthorep_to_jsonable,
    parse_graph,
    record_to_jsonable,
)
from .simulate import NoiseModel, epsilon_prime, epsilon_signaling, run_experiment
from .theta import theta, verify_feasibility


def _load_graph(source: str, fmt: str) -> Graph:
    if source == "-":
        return parse_graph(sys.stdin.read(), fmt)
    path = Path(source)
    if path.exists():
        return parse_graph(path.read_text(encoding="utf-8"), fmt)
    try:
        return catalog(source)
    except ValueError as err:
        raise ParseError(f"{source!r} is neither a readable file nor a catalog name ({err})")


def _write(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _add_graph_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("graph", help="graph file (JSON or DIMACS), '-' for stdin, or a catalog name")
    p.add_argument(
        "--input-format",
        choices=("auto", "json", "dimacs"),
        default="auto",
        help="input graph format (default: sniffed)",
    )


def _add_output_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("json", "text"), default="text")
    p.add_argument("--output", metavar="PATH", help="write output to PATH instead of stdout")


def _add_noise_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--noise-depol", type=float, default=0.0, metavar="P")
    p.add_argument("--noise-angle", type=float, default=0.0, metavar="RAD")
    p.add_argument("--noise-flip", type=float, default=0.0, metavar="P")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twopoint",
        description="classical/quantum bounds of graph inequalities, two-point compilation, and simulation",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("alpha", help="exact independence number")
    _add_graph_args(p)
    _add_output_args(p)
    p.add_argument("--limit", type=int, default=64, help="vertex limit for the exact solver")

    p = sub.add_parser("theta", help="Lovasz number with certificates")
    _add_graph_args(p)
    _add_output_args(p)
    p.add_argument("--tolerance", type=float, default=1e-7)
    p.add_argument("--dump-sdp", action="store_true", help="include the primal matrix in JSON output")

    p = sub.add_parser("transform", help="compile the two-point event graph")
    _add_graph_args(p)
    _add_output_args(p)

    p = sub.add_parser("orthorep", help="extract the optimal orthogonal representation")
    _add_graph_args(p)
    _add_output_args(p)
    p.add_argument("--tolerance", type=float, default=1e-7)

    p = sub.add_parser("simulate", help="simulate the two-point experiment")
    _add_graph_args(p)
    _add_output_args(p)
    p.add_argument("--tolerance", type=float, default=1e-7)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scheme", choices=("projective", "demolition"), default="projective")
    _add_noise_args(p)

    p = sub.add_parser("certify", help="full pipeline with identity checks")
    _add_graph_args(p)
    _add_output_args(p)
    p.add_argument("--tolerance", type=float, default=1e-7)
    p.add_argument("--shots", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--scheme", choices=("projective", "demolition"), default="projective")
    p.add_argument("--skip-montecarlo", action="store_true")
    p.add_argument("--alpha-limit", type=int, default=64)
    p.add_argument("--dump-sdp", action="store_true")
    _add_noise_args(p)

    p = sub.add_parser("catalog", help="list catalog entries or emit one graph")
    p.add_argument("name", nargs="?", help="catalog entry; omit to list all")
    _add_output_args(p)

    return parser


def _cmd_alpha(args) -> int:
    g = _load_graph(args.graph, args.input_format)
    res = independence_number(g, limit=args.limit)
    if args.format == "json":
        out = dumps_canonical(
            {"alpha": res.alpha, "witness": list(res.witness), "node_count": res.node_count}
        ) + "\n"
    else:
        out = (
            f"α = {res.alpha}\nwitness = {list(res.witness)}\n"
            f"search nodes = {res.node_count}\n"
        )
    _write(out, args.output)
    return 0


def _cmd_theta(args) -> int:
    g = _load_graph(args.graph, args.input_format)
    sol = theta(g, tolerance=args.tolerance)
    feas = verify_feasibility(g, sol.X, args.tolerance)
    payload = {
        "theta": sol.primal_value,
        "dual": sol.dual_value,
        "gap": sol.duality_gap,
        "status": sol.status.value,
        "iterations": sol.iterations,
        "residuals": {
            "min_eigenvalue": sol.residuals.min_eigenvalue,
            "trace_error": sol.residuals.trace_error,
            "max_edge_entry": sol.residuals.max_edge_entry,
        },
        "feasible": feas.passed,
    }
    if args.dump_sdp:
        payload["X"] = [[float(x) for x in row] for row in sol.X]
    if args.format == "json":
        out = dumps_canonical(payload) + "\n"
    else:
        out = (
            f"ϑ = {format_float(sol.primal_value)}\n"
            f"dual = {format_float(sol.dual_value)} (gap {format_float(sol.duality_gap)})\n"
            f"status = {sol.status.value}, iterations = {sol.iterations}\n"
            f"feasibility = {'PASS' if feas.passed else 'FAIL'}\n"
        )
    _write(out, args.output)
    return 0 if sol.status.value == "converged" and feas.passed else 2


def _cmd_transform(args) -> int:
    g = _load_graph(args.graph, args.input_format)
    eg = build_two_point_graph(g)
    if args.format == "json":
        out = dumps_canonical(event_graph_to_jsonable(eg)) + "\n"
    else:
        lines = [f"G: n={g.n}, |E|={len(g.edges)}"]
        lines.append(f"G': n={eg.n}, |E|={len(eg.edges)}")
        for idx, lab in enumerate(eg.labels):
            assigns = lab.assignments()
            obs = ",".join(str(o) for o in assigns)
            outs = ",".join(str(assigns[o]) for o in assigns)
            lines.append(f"  vertex {idx}: {outs}|{obs}")
        out = "\n".join(lines) + "\n"
    _write(out, args.output)
    return 0


def _cmd_orthorep(args) -> int:
    g = _load_graph(args.graph, args.input_format)
    sol = theta(g, tolerance=args.tolerance)
    rep = extract_ortho_rep(g, sol, tolerance=args.tolerance)
    report = verify_ortho_rep(g, rep, 100 * args.tolerance, theta_target=sol.primal_value)
    if args.format == "json":
        payload = orthorep_to_jsonable(rep)
        payload["verification"] = {
            "max_edge_overlap": report.max_edge_overlap,
            "max_norm_error": report.max_norm_error,
            "overlap_sum": report.overlap_sum,
            "overlap_error": report.overlap_error,
            "passed": report.passed,
        }
        out = dumps_canonical(payload) + "\n"
    else:
        out = (
            f"d = {rep.dimension}\n"
            f"overlap sum = {format_float(report.overlap_sum)} "
            f"(ϑ error {format_float(report.overlap_error)})\n"
            f"max edge overlap = {format_float(report.max_edge_overlap)}\n"
            f"verification = {'PASS' if report.passed else 'FAIL'}\n"
        )
    _write(out, args.output)
    return 0 if report.passed else 2


def _cmd_simulate(args) -> int:
    g = _load_graph(args.graph, args.input_format)
    sol = theta(g, tolerance=args.tolerance)
    rep = extract_ortho_rep(g, sol, tolerance=args.tolerance)
    noise = NoiseModel(
        depolarizing_p=args.noise_depol,
        vector_misalignment_angle=args.noise_angle,
        outcome_flip_p=args.noise_flip,
    )
    record = run_experiment(
        rep, g, shots=args.shots, seed=args.seed, noise=noise, scheme=args.scheme
    )
    if args.format == "json":
        out = dumps_canonical(record_to_jsonable(record)) + "\n"
    else:
        s, se = record.s_estimate()
        eps = epsilon_signaling(record)
        eps_p = epsilon_prime(record)
        max_eps = max((e.difference / e.stderr for e in eps), default=0.0)
        max_eps_p = max((e.difference / e.stderr for e in eps_p), default=0.0)
        out = (
            f"scheme = {record.scheme}, shots = {record.shots}, seed = {record.seed}\n"
            f"Ŝ = {format_float(s)} ± {format_float(se)}\n"
            f"ε entries = {len(eps)}, max |ε|/σ = {format_float(max_eps)}\n"
            f"ε′ entries = {len(eps_p)}, max |ε′|/σ = {format_float(max_eps_p)}\n"
        )
    _write(out, args.output)
    return 0


def _cmd_certify(args) -> int:
    g = _load_graph(args.graph, args.input_format)
    opts = CertifyOptions(
        tolerance=args.tolerance,
        shots=args.shots,
        seed=args.seed,
        noise=NoiseModel(
            depolarizing_p=args.noise_depol,
            vector_misalignment_angle=args.noise_angle,
            outcome_flip_p=args.noise_flip,
        ),
        scheme=args.scheme,
        skip_montecarlo=args.skip_montecarlo,
        alpha_limit=args.alpha_limit,
        include_sdp_matrices=args.dump_sdp,
    )
    try:
        report = certify(g, opts)
    except StageError as err:
        _write(emit_report(err.report, args.format), args.output)
        print(f"error: {err}", file=sys.stderr)
        return 1
    _write(emit_report(report, args.format), args.output)
    return 0 if report.all_passed else 2


def _cmd_catalog(args) -> int:
    if args.name is None:
        entries = catalog_names()
        if args.format == "json":
            out = dumps_canonical(entries) + "\n"
        else:
            width = max(len(k) for k in entries)
            out = "\n".join(f"{k:<{width}}  {v}" for k, v in sorted(entries.items())) + "\n"
        _write(out, args.output)
        return 0
    g = catalog(args.name)
    _write(emit_graph(g, "json" if args.format == "json" else "dimacs"), args.output)
    return 0


_COMMANDS = {
    "alpha": _cmd_alpha,
    "theta": _cmd_theta,
    "transform": _cmd_transform,
    "orthorep": _cmd_orthorep,
    "simulate": _cmd_simulate,
    "certify": _cmd_certify,
    "catalog": _cmd_catalog,
}


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ParseError, ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
