"""End-to-end certification pipeline.

For an input graph G the pipeline computes the classical bound alpha(G) and
the quantum bound theta(G), compiles the two-point event graph G', recomputes
both bounds there, checks the transfer identities alpha(G') = alpha(G) + |E|
and theta(G') = theta(G) + |E|, extracts and verifies an optimal orthogonal
representation, evaluates the exact witness values, and optionally simulates
the experiment with finite statistics.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Optional

from .graphs import Graph, build_two_point_graph, expand_weighted
from .independence import independence_number
from .orthorep import extract_ortho_rep, verify_ortho_rep
from .serialize import dumps_canonical, format_float, record_to_jsonable
from .simulate import (
    NoiseModel,
    TwoPointContext,
    epsilon_prime,
    epsilon_signaling,
    evaluate_s,
    evaluate_s_prime,
    joint_probs_projective,
    pure_state,
    run_experiment,
)
from .theta import theta, verify_feasibility

SCHEMA_VERSION = 1
EXACT_CONSISTENCY_TOL = 1e-10


@dataclass(frozen=True)
class CertifyOptions:
    tolerance: float = 1e-7
    shots: int = 100_000
    seed: int = 0
    noise: NoiseModel = field(default_factory=NoiseModel)
    scheme: str = "projective"
    skip_montecarlo: bool = False
    alpha_limit: int = 64
    include_sdp_matrices: bool = False


@dataclass(frozen=True)
class CertifyReport:
    """Pipeline results as a JSON-ready tree plus derived pass/fail checks."""

    data: dict[str, Any]

    @property
    def complete(self) -> bool:
        return bool(self.data.get("complete"))

    def checks(self) -> list[tuple[str, bool]]:
        return [(name, bool(ok)) for name, ok in self.data.get("checks", [])]

    @property
    def all_passed(self) -> bool:
        return self.complete and all(ok for _, ok in self.checks())

    def to_jsonable(self) -> dict[str, Any]:
        return self.data


class StageError(RuntimeError):
    """A pipeline stage failed; carries the partial report."""

    def __init__(self, stage: str, cause: Exception, report: CertifyReport):
        self.stage = stage
        self.cause = cause
        self.report = report
        super().__init__(f"certify stage {stage!r} failed: {cause}")


def _theta_section(g: Graph, sol, tolerance: float, include_matrix: bool) -> dict[str, Any]:
    feas = verify_feasibility(g, sol.X, tolerance)
    out: dict[str, Any] = {
        "value": float(sol.primal_value),
        "dual": float(sol.dual_value),
        "gap": float(sol.duality_gap),
        "status": sol.status.value,
        "iterations": sol.iterations,
        "residuals": {
            "min_eigenvalue": sol.residuals.min_eigenvalue,
            "trace_error": sol.residuals.trace_error,
            "max_edge_entry": sol.residuals.max_edge_entry,
        },
        "feasible": feas.passed,
    }
    if include_matrix:
        out["X"] = [[float(x) for x in row] for row in sol.X]
    return out


def certify(g: Graph, options: Optional[CertifyOptions] = None) -> CertifyReport:
    """Run the full pipeline; stage failures raise StageError with a partial report.

    All pass/fail flags in the report are functions of the numbers stored
    next to them, never of solver-internal state.
    """
    opts = options or CertifyOptions()
    data: dict[str, Any] = {
        "schema": SCHEMA_VERSION,
        "complete": False,
        "options": {
            "tolerance": opts.tolerance,
            "shots": opts.shots,
            "seed": opts.seed,
            "scheme": opts.scheme,
            "skip_montecarlo": opts.skip_montecarlo,
            "noise": {
                "depolarizing_p": opts.noise.depolarizing_p,
                "vector_misalignment_angle": opts.noise.vector_misalignment_angle,
                "outcome_flip_p": opts.noise.outcome_flip_p,
            },
        },
        "input": {"n": g.n, "edge_count": len(g.edges), "weighted": g.is_weighted},
    }
    checks: list[list[Any]] = []
    data["checks"] = checks

    def fail(stage: str, err: Exception) -> StageError:
        data["error"] = {"stage": stage, "message": str(err)}
        return StageError(stage, err, CertifyReport(data=data))

    try:
        if g.is_weighted:
            work, provenance = expand_weighted(g)
            data["expanded"] = {
                "n": work.n,
                "edge_count": len(work.edges),
                "provenance": list(provenance),
            }
        else:
            work = g
    except Exception as err:
        raise fail("expand", err) from err

    try:
        alpha_res = independence_number(work, limit=opts.alpha_limit)
        data["alpha_g"] = {
            "alpha": alpha_res.alpha,
            "witness": list(alpha_res.witness),
            "node_count": alpha_res.node_count,
        }
    except Exception as err:
        raise fail("alpha_g", err) from err

    try:
        sol_g = theta(work, tolerance=opts.tolerance)
        data["theta_g"] = _theta_section(work, sol_g, opts.tolerance, opts.include_sdp_matrices)
        checks.append(["theta_g_converged", data["theta_g"]["status"] == "converged"])
        checks.append(["theta_g_feasible", data["theta_g"]["feasible"]])
    except Exception as err:
        raise fail("theta_g", err) from err

    try:
        eg = build_two_point_graph(work)
        gp = eg.as_graph()
        data["event_graph"] = {"n": eg.n, "edge_count": len(eg.edges)}
    except Exception as err:
        raise fail("compile", err) from err

    try:
        alpha_gp = independence_number(gp, limit=opts.alpha_limit)
        data["alpha_gprime"] = {
            "alpha": alpha_gp.alpha,
            "witness": list(alpha_gp.witness),
            "node_count": alpha_gp.node_count,
        }
    except Exception as err:
        raise fail("alpha_gprime", err) from err

    try:
        sol_gp = theta(gp, tolerance=opts.tolerance)
        data["theta_gprime"] = _theta_section(gp, sol_gp, opts.tolerance, opts.include_sdp_matrices)
        checks.append(["theta_gprime_converged", data["theta_gprime"]["status"] == "converged"])
        checks.append(["theta_gprime_feasible", data["theta_gprime"]["feasible"]])
    except Exception as err:
        raise fail("theta_gprime", err) from err

    edge_count = len(work.edges)
    alpha_diff = data["alpha_gprime"]["alpha"] - data["alpha_g"]["alpha"] - edge_count
    theta_diff = data["theta_gprime"]["value"] - data["theta_g"]["value"] - edge_count
    theta_tol = 10 * opts.tolerance
    data["identities"] = {
        "edge_count": edge_count,
        "alpha_difference": alpha_diff,
        "theta_difference": theta_diff,
        "theta_tolerance": theta_tol,
    }
    checks.append(["alpha_identity", alpha_diff == 0])
    checks.append(["theta_identity", abs(theta_diff) <= theta_tol])

    try:
        rep = extract_ortho_rep(work, sol_g, tolerance=opts.tolerance)
        rep_report = verify_ortho_rep(
            work, rep, 100 * opts.tolerance, theta_target=data["theta_g"]["value"]
        )
        data["orthorep"] = {
            "dimension": rep.dimension,
            "max_edge_overlap": rep_report.max_edge_overlap,
            "max_norm_error": rep_report.max_norm_error,
            "overlap_sum": rep_report.overlap_sum,
            "overlap_error": rep_report.overlap_error,
            "tolerance": 100 * opts.tolerance,
        }
        checks.append(["orthorep_verified", rep_report.passed])
    except Exception as err:
        raise fail("orthorep", err) from err

    try:
        state = pure_state(rep.psi)
        singles = {v: rep.overlap(v) for v in range(work.n)}
        pair11 = {}
        tables = {}
        for (i, j) in work.edges:
            probs = joint_probs_projective(state, TwoPointContext(i, j), rep)
            pair11[(i, j)] = probs[(1, 1)]
            tables[(i, j)] = probs
        s_exact = evaluate_s(work, singles, pair11)
        s_prime = evaluate_s_prime(work, singles, tables)
        consistency = abs(s_prime - edge_count - s_exact)
        data["exact"] = {
            "s": s_exact,
            "s_prime": s_prime,
            "s_prime_minus_edges": s_prime - edge_count,
            "consistency_error": consistency,
            "s_vs_theta_error": abs(s_exact - data["theta_g"]["value"]),
            "s_tolerance": 100 * opts.tolerance,
        }
        checks.append(["s_prime_consistent", consistency <= EXACT_CONSISTENCY_TOL])
        checks.append(
            ["s_matches_theta", data["exact"]["s_vs_theta_error"] <= 100 * opts.tolerance]
        )
    except Exception as err:
        raise fail("exact", err) from err

    if not opts.skip_montecarlo:
        try:
            record = run_experiment(
                rep,
                work,
                shots=opts.shots,
                seed=opts.seed,
                noise=opts.noise,
                scheme=opts.scheme,
            )
            rec_json = record_to_jsonable(record)
            eps = epsilon_signaling(record)
            eps_p = epsilon_prime(record)
            data["montecarlo"] = {
                "record": rec_json,
                "s_estimate": rec_json["s_estimate"],
                "s_stderr": rec_json["s_stderr"],
                "max_epsilon_significance": max(
                    (e.difference / e.stderr for e in eps), default=0.0
                ),
                "max_epsilon_prime_significance": max(
                    (e.difference / e.stderr for e in eps_p), default=0.0
                ),
            }
        except Exception as err:
            raise fail("montecarlo", err) from err

    data["complete"] = True
    return CertifyReport(data=data)


def _fmt(x: Any) -> str:
    return format_float(float(x))


def render_text(report: CertifyReport) -> str:
    """Human-readable rendering; recomputes every PASS/FAIL from report numbers."""
    d = report.data
    lines = [f"two-point certification report (schema {d['schema']})"]
    inp = d["input"]
    lines.append(
        f"input: n={inp['n']}, |E|={inp['edge_count']}, weighted={'yes' if inp['weighted'] else 'no'}"
    )
    if "expanded" in d:
        ex = d["expanded"]
        lines.append(f"expanded: n={ex['n']}, |E|={ex['edge_count']}")
    if "alpha_g" in d:
        a = d["alpha_g"]
        lines.append(f"α(G) = {a['alpha']} (witness {a['witness']}, nodes {a['node_count']})")
    if "theta_g" in d:
        t = d["theta_g"]
        lines.append(
            f"ϑ(G) = {_fmt(t['value'])} (dual {_fmt(t['dual'])}, gap {_fmt(t['gap'])}, "
            f"{t['status']}, feasible {'PASS' if t['feasible'] else 'FAIL'})"
        )
    if "event_graph" in d:
        egs = d["event_graph"]
        lines.append(f"G': {egs['n']} vertices, {egs['edge_count']} edges")
    if "alpha_gprime" in d:
        lines.append(f"α(G') = {d['alpha_gprime']['alpha']}")
    if "theta_gprime" in d:
        lines.append(f"ϑ(G') = {_fmt(d['theta_gprime']['value'])}")
    if "identities" in d:
        ident = d["identities"]
        ok_a = ident["alpha_difference"] == 0
        lines.append(
            f"identity α(G') − α(G) − |E| = {ident['alpha_difference']}: "
            f"{'PASS' if ok_a else 'FAIL'}"
        )
        ok_t = abs(ident["theta_difference"]) <= ident["theta_tolerance"]
        lines.append(
            f"identity |ϑ(G') − ϑ(G) − |E|| = {_fmt(abs(ident['theta_difference']))} "
            f"≤ {_fmt(ident['theta_tolerance'])}: {'PASS' if ok_t else 'FAIL'}"
        )
    if "orthorep" in d:
        o = d["orthorep"]
        ok = (
            o["max_edge_overlap"] <= o["tolerance"]
            and o["max_norm_error"] <= o["tolerance"]
            and (o["overlap_error"] is None or o["overlap_error"] <= o["tolerance"])
        )
        err_txt = "n/a" if o["overlap_error"] is None else _fmt(o["overlap_error"])
        lines.append(
            f"orthorep: d={o['dimension']}, max edge overlap {_fmt(o['max_edge_overlap'])}, "
            f"overlap sum {_fmt(o['overlap_sum'])} (err {err_txt}): "
            f"{'PASS' if ok else 'FAIL'}"
        )
    if "exact" in d:
        e = d["exact"]
        ok = e["consistency_error"] <= EXACT_CONSISTENCY_TOL
        lines.append(
            f"exact: S = {_fmt(e['s'])}, S' = {_fmt(e['s_prime'])}, "
            f"S' − |E| − S = {_fmt(e['consistency_error'])}: {'PASS' if ok else 'FAIL'}"
        )
    if "montecarlo" in d:
        mc = d["montecarlo"]
        lines.append(
            f"montecarlo: Ŝ = {_fmt(mc['s_estimate'])} ± {_fmt(mc['s_stderr'])}, "
            f"max ε significance {_fmt(mc['max_epsilon_significance'])}, "
            f"max ε′ significance {_fmt(mc['max_epsilon_prime_significance'])}"
        )
    if "error" in d:
        lines.append(f"error at stage {d['error']['stage']}: {d['error']['message']}")
    lines.append(f"complete: {'yes' if d.get('complete') else 'NO'}")
    lines.append(f"overall: {'PASS' if report.all_passed else 'FAIL'}")
    return "\n".join(lines) + "\n"


def emit_report(report: CertifyReport, fmt: str = "json") -> str:
    """Serialize deterministically; identical reports yield identical bytes."""
    if fmt == "json":
        return dumps_canonical(report.to_jsonable()) + "\n"
    if fmt == "text":
        return render_text(report)
    raise ValueError(f"unknown report format {fmt!r}")
