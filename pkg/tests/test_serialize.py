import json
import math

import numpy as np
import pytest

from twopoint import (
    OrthoRep,
    ParseError,
    build_graph,
    build_two_point_graph,
    builtin_kcbs_rep,
    emit_graph,
    kcbs_graph,
    parse_graph,
    run_experiment,
)
from twopoint.serialize import (
    dumps_canonical,
    event_graph_from_jsonable,
    event_graph_to_jsonable,
    format_float,
    orthorep_from_jsonable,
    orthorep_to_jsonable,
    record_to_jsonable,
)


class TestFloatFormat:
    def test_integral_floats_keep_a_decimal_point(self):
        assert format_float(2.0) == "2.0"
        assert format_float(-1.0) == "-1.0"

    def test_seventeen_digits_round_trip(self):
        for x in (math.sqrt(5), 1 / 3, 2.2360679774997896, 1e-17, -math.pi):
            assert float(format_float(x)) == x

    def test_rejects_non_finite(self):
        for bad in (math.nan, math.inf, -math.inf):
            with pytest.raises(ValueError):
                format_float(bad)


class TestCanonicalJson:
    def test_keys_sorted(self):
        assert dumps_canonical({"b": 1, "a": 2}) == '{"a":2,"b":1}'

    def test_deterministic(self):
        obj = {"x": [1.5, 2, True, None], "y": {"nested": math.sqrt(2)}}
        assert dumps_canonical(obj) == dumps_canonical(obj)

    def test_output_is_valid_json(self):
        obj = {"values": [0.1, 1.0, 7], "name": "c5", "flag": False}
        assert json.loads(dumps_canonical(obj)) == obj

    def test_rejects_unknown_types(self):
        with pytest.raises(TypeError):
            dumps_canonical(object())


class TestGraphFormats:
    def test_json_round_trip(self, c5):
        assert parse_graph(emit_graph(c5, "json"), "json") == c5

    def test_json_round_trip_weighted(self):
        g = build_graph(3, [(0, 1), (1, 2)], weights={1: 4})
        assert parse_graph(emit_graph(g, "json"), "json") == g

    def test_dimacs_round_trip(self, c5):
        assert parse_graph(emit_graph(c5, "dimacs"), "dimacs") == c5

    def test_dimacs_round_trip_weighted(self):
        g = build_graph(3, [(0, 1), (1, 2)], weights={1: 4})
        assert parse_graph(emit_graph(g, "dimacs"), "dimacs") == g

    def test_dimacs_pentagon(self):
        text = "c pentagon\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 1 5\n"
        assert parse_graph(text, "dimacs") == kcbs_graph()

    def test_auto_detection(self, c5):
        assert parse_graph(emit_graph(c5, "json")) == c5
        assert parse_graph(emit_graph(c5, "dimacs")) == c5

    def test_duplicate_edge_warns_and_dedupes(self):
        text = '{"n": 3, "edges": [[0, 1], [1, 0]]}'
        with pytest.warns(UserWarning, match="duplicate"):
            g = parse_graph(text, "json")
        assert g.edges == ((0, 1),)

    def test_self_loop_rejected(self):
        with pytest.raises(ParseError, match="self-loop"):
            parse_graph('{"n": 3, "edges": [[1, 1]]}', "json")

    def test_dimacs_errors_carry_line_numbers(self):
        with pytest.raises(ParseError, match="line 2"):
            parse_graph("p edge 3 1\ne 1 9\n", "dimacs")
        with pytest.raises(ParseError, match="line 1"):
            parse_graph("e 1 2\n", "dimacs")

    def test_invalid_json_reported(self):
        with pytest.raises(ParseError, match="invalid JSON"):
            parse_graph("{oops", "json")

    def test_unknown_format(self, c5):
        with pytest.raises(ValueError, match="format"):
            parse_graph("x", "yaml")


class TestEventGraphSerialization:
    def test_round_trip(self, k2):
        eg = build_two_point_graph(k2)
        data = event_graph_to_jsonable(eg)
        assert data["n"] == 5
        assert data["labels"][0] == {"kind": "single", "obs": [0], "out": [1]}
        assert data["labels"][3] == {"kind": "pair", "obs": [0, 1], "out": [0, 1]}
        assert event_graph_from_jsonable(json.loads(dumps_canonical(data))) == eg


class TestOrthoRepSerialization:
    def test_real_round_trip(self):
        rep = builtin_kcbs_rep()
        data = json.loads(dumps_canonical(orthorep_to_jsonable(rep)))
        back = orthorep_from_jsonable(data)
        assert back.dimension == 3
        assert np.allclose(back.psi, rep.psi)
        assert np.allclose(back.vectors, rep.vectors)

    def test_complex_entries_as_re_im_pairs(self):
        vec = np.array([1 / math.sqrt(2), 1j / math.sqrt(2)])
        rep = OrthoRep(dimension=2, psi=vec, vectors=np.array([vec, vec.conj()]))
        data = orthorep_to_jsonable(rep)
        assert data["psi"][1] == [0.0, pytest.approx(1 / math.sqrt(2))]
        back = orthorep_from_jsonable(json.loads(dumps_canonical(data)))
        assert np.allclose(back.vectors, rep.vectors)


class TestRecordSerialization:
    def test_record_jsonable_is_consistent(self):
        record = run_experiment(builtin_kcbs_rep(), kcbs_graph(), shots=300, seed=21)
        data = json.loads(dumps_canonical(record_to_jsonable(record)))
        assert data["shots"] == 300
        assert data["seed"] == 21
        assert len(data["pairs"]) == 10
        for entry in data["pairs"].values():
            assert sum(entry["counts"].values()) == 300
        assert len(data["epsilon"]) == 10
        assert len(data["epsilon_prime"]) == 10
        assert data["s_estimate"] == pytest.approx(record.s_estimate()[0])
