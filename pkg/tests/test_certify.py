import json
import math

import pytest

from twopoint import (
    CertifyOptions,
    StageError,
    build_graph,
    catalog,
    certify,
    complete_graph,
    cycle_graph,
    emit_report,
)
from twopoint.cli import main

SQRT5 = math.sqrt(5.0)
FAST = CertifyOptions(skip_montecarlo=True)


class TestCatalog:
    def test_c5(self):
        assert catalog("c5") == cycle_graph(5)

    def test_parametric_names(self):
        assert catalog("c7") == cycle_graph(7)
        assert catalog("k4") == complete_graph(4)
        assert catalog("empty6").n == 6 and catalog("empty6").edges == ()

    def test_fig2_k2(self):
        assert catalog("fig2-k2") == complete_graph(2)

    def test_chsh_circulant(self):
        from twopoint import brute_force_alpha

        g = catalog("chsh-circulant")
        assert g.n == 8 and len(g.edges) == 12
        assert brute_force_alpha(g) == 3

    def test_petersen(self):
        from twopoint import brute_force_alpha

        g = catalog("petersen")
        assert g.n == 10 and len(g.edges) == 15
        assert brute_force_alpha(g) == 4

    def test_even_cycles_rejected(self):
        with pytest.raises(ValueError, match="odd"):
            catalog("c6")

    def test_unknown_name_lists_entries(self):
        with pytest.raises(ValueError, match="available:.*petersen"):
            catalog("dodecahedron")


class TestCertifyPipeline:
    def test_pentagon(self):
        report = certify(cycle_graph(5), FAST)
        d = report.data
        assert report.complete and report.all_passed
        assert d["alpha_g"]["alpha"] == 2
        assert abs(d["theta_g"]["value"] - SQRT5) <= 1e-6
        assert d["event_graph"]["n"] == 20
        assert d["alpha_gprime"]["alpha"] == 7
        assert abs(d["theta_gprime"]["value"] - (5 + SQRT5)) <= 1e-5
        assert abs(d["exact"]["s"] - SQRT5) <= 1e-5

    def test_single_edge(self):
        report = certify(complete_graph(2), FAST)
        d = report.data
        assert report.all_passed
        assert d["alpha_g"]["alpha"] == 1
        assert abs(d["theta_g"]["value"] - 1.0) <= 1e-6
        assert d["event_graph"] == {"n": 5, "edge_count": 8}
        assert d["alpha_gprime"]["alpha"] == 2
        assert abs(d["theta_gprime"]["value"] - 2.0) <= 1e-6
        assert abs(d["exact"]["s"] - 1.0) <= 1e-6

    def test_empty_graph(self):
        report = certify(build_graph(4, []), FAST)
        d = report.data
        assert report.all_passed
        assert d["alpha_g"]["alpha"] == 4
        assert abs(d["theta_g"]["value"] - 4.0) <= 1e-5
        assert d["event_graph"]["n"] == 4
        assert d["identities"]["alpha_difference"] == 0

    def test_weighted_input_is_expanded(self):
        g = build_graph(5, cycle_graph(5).edges, weights={0: 2})
        report = certify(g, FAST)
        d = report.data
        assert report.all_passed
        assert d["input"]["weighted"] is True
        assert d["expanded"]["n"] == 6
        assert d["alpha_g"]["alpha"] == 3

    def test_montecarlo_section(self):
        report = certify(cycle_graph(5), CertifyOptions(shots=20_000, seed=5))
        mc = report.data["montecarlo"]
        assert abs(mc["s_estimate"] - SQRT5) <= 6 * mc["s_stderr"]
        assert len(mc["record"]["epsilon"]) == 10

    def test_stage_error_carries_partial_report(self):
        # K7 compiles to 70 event vertices, beyond the default alpha limit.
        with pytest.raises(StageError) as excinfo:
            certify(complete_graph(7), FAST)
        err = excinfo.value
        assert err.stage == "alpha_gprime"
        partial = err.report
        assert not partial.complete
        assert partial.data["error"]["stage"] == "alpha_gprime"
        assert "alpha_g" in partial.data and "theta_g" in partial.data
        text = emit_report(partial, "text")
        assert "complete: NO" in text

    def test_raised_alpha_limit_unblocks(self):
        report = certify(complete_graph(7), CertifyOptions(skip_montecarlo=True, alpha_limit=80))
        assert report.all_passed
        assert report.data["alpha_gprime"]["alpha"] == 1 + 21


class TestReportEmission:
    def test_byte_identical_reruns(self):
        a = emit_report(certify(cycle_graph(5), CertifyOptions(shots=2000, seed=3)), "json")
        b = emit_report(certify(cycle_graph(5), CertifyOptions(shots=2000, seed=3)), "json")
        assert a == b

    def test_json_is_parseable_and_versioned(self):
        report = certify(complete_graph(2), FAST)
        data = json.loads(emit_report(report, "json"))
        assert data["schema"] == 1
        assert data["complete"] is True

    def test_text_has_identity_lines(self):
        text = emit_report(certify(cycle_graph(5), FAST), "text")
        assert "identity α(G') − α(G) − |E| = 0: PASS" in text
        assert "overall: PASS" in text
        assert text.count("PASS") >= 4

    def test_unknown_format(self):
        with pytest.raises(ValueError, match="format"):
            emit_report(certify(complete_graph(2), FAST), "xml")

    def test_sdp_dump_is_flag_gated(self):
        without = certify(complete_graph(2), FAST)
        assert "X" not in without.data["theta_g"]
        opts = CertifyOptions(skip_montecarlo=True, include_sdp_matrices=True)
        with_dump = certify(complete_graph(2), opts)
        X = with_dump.data["theta_g"]["X"]
        assert len(X) == 2 and len(X[0]) == 2


class TestCli:
    def test_alpha_json(self, capsys):
        assert main(["alpha", "c5", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["alpha"] == 2

    def test_theta_text(self, capsys):
        assert main(["theta", "c5"]) == 0
        out = capsys.readouterr().out
        assert "2.23606" in out and "PASS" in out

    def test_transform_json(self, capsys):
        assert main(["transform", "fig2-k2", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["n"] == 5 and len(data["edges"]) == 8

    def test_orthorep_json(self, capsys):
        assert main(["orthorep", "c5", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["d"] == 3 and data["verification"]["passed"] is True

    def test_simulate_json(self, capsys):
        assert main(["simulate", "c5", "--shots", "2000", "--seed", "1", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["shots"] == 2000 and len(data["pairs"]) == 10

    def test_certify_exit_code_and_output(self, capsys):
        assert main(["certify", "c5", "--skip-montecarlo"]) == 0
        out = capsys.readouterr().out
        assert "overall: PASS" in out

    def test_certify_json_deterministic(self, tmp_path):
        out1 = tmp_path / "a.json"
        out2 = tmp_path / "b.json"
        argv = ["certify", "c5", "--shots", "2000", "--seed", "9", "--format", "json"]
        assert main(argv + ["--output", str(out1)]) == 0
        assert main(argv + ["--output", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_certify_stage_failure_emits_partial_report(self, capsys):
        assert main(["certify", "k7", "--skip-montecarlo", "--format", "json"]) == 1
        captured = capsys.readouterr()
        data = json.loads(captured.out)
        assert data["complete"] is False
        assert data["error"]["stage"] == "alpha_gprime"
        assert "alpha_gprime" in captured.err

    def test_graph_file_input(self, tmp_path, capsys):
        path = tmp_path / "graph.json"
        path.write_text('{"n": 2, "edges": [[0, 1]]}')
        assert main(["alpha", str(path)]) == 0
        assert "α = 1" in capsys.readouterr().out

    def test_dimacs_file_input(self, tmp_path, capsys):
        path = tmp_path / "graph.col"
        path.write_text("p edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 5\n")
        assert main(["alpha", str(path)]) == 0
        assert "α = 2" in capsys.readouterr().out

    def test_weighted_graph_file_through_certify(self, tmp_path, capsys):
        path = tmp_path / "weighted.json"
        path.write_text('{"n": 2, "edges": [[0, 1]], "weights": {"0": 2}}')
        assert main(["certify", str(path), "--skip-montecarlo", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["expanded"]["n"] == 3
        assert data["alpha_g"]["alpha"] == 2

    def test_unknown_graph_is_operational_error(self, capsys):
        assert main(["alpha", "no-such-graph"]) == 1
        assert "error" in capsys.readouterr().err

    def test_failed_check_exits_2(self, capsys, monkeypatch):
        import twopoint.cli as cli_mod

        def doctored(g, opts):
            report = certify(g, opts)
            report.data["checks"].append(["injected_failure", False])
            return report

        monkeypatch.setattr(cli_mod, "certify", doctored)
        assert main(["certify", "fig2-k2", "--skip-montecarlo"]) == 2
        assert "overall: FAIL" in capsys.readouterr().out

    def test_catalog_listing(self, capsys):
        assert main(["catalog"]) == 0
        out = capsys.readouterr().out
        assert "petersen" in out and "chsh-circulant" in out

    def test_catalog_emit_round_trips(self, capsys):
        from twopoint import parse_graph

        assert main(["catalog", "c5", "--format", "json"]) == 0
        assert parse_graph(capsys.readouterr().out) == cycle_graph(5)
