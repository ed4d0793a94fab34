import math

import numpy as np
import pytest

from twopoint import (
    SdpStatus,
    build_graph,
    build_two_point_graph,
    complement,
    complete_graph,
    cycle_graph,
    catalog,
    odd_cycle_theta,
    theta,
    theta_sandwich,
    verify_feasibility,
)
from conftest import random_graph

SQRT5 = math.sqrt(5.0)

# Frozen evaluations of n cos(pi/n) / (1 + cos(pi/n)).
ODD_CYCLE_VALUES = {
    5: 2.23606797749979,
    7: 3.317667207394096,
    9: 4.360089581434065,
    11: 5.386302911967422,
}


class TestOddCycleOracle:
    @pytest.mark.parametrize("n,expected", sorted(ODD_CYCLE_VALUES.items()))
    def test_frozen_values(self, n, expected):
        assert odd_cycle_theta(n) == pytest.approx(expected, abs=1e-12)

    def test_rejects_even_and_small(self):
        for bad in (4, 6, 3, 1):
            with pytest.raises(ValueError):
                odd_cycle_theta(bad)


class TestThetaKnownValues:
    def test_c5_is_sqrt5(self, c5):
        sol = theta(c5)
        assert sol.status is SdpStatus.CONVERGED
        assert sol.primal_value == pytest.approx(SQRT5, abs=1e-6)

    def test_empty_graph(self):
        for n in (1, 3, 6):
            sol = theta(build_graph(n, []))
            assert sol.primal_value == pytest.approx(n, abs=1e-6)

    def test_complete_graph(self):
        for n in (2, 4, 7):
            sol = theta(complete_graph(n))
            assert sol.primal_value == pytest.approx(1.0, abs=1e-6)

    @pytest.mark.parametrize("n", [5, 7, 9, 11])
    def test_matches_cycle_oracle(self, n):
        sol = theta(cycle_graph(n))
        assert sol.primal_value == pytest.approx(odd_cycle_theta(n), abs=1e-6)

    def test_petersen(self, petersen):
        assert theta(petersen).primal_value == pytest.approx(4.0, abs=1e-6)

    def test_chsh_circulant(self):
        g = catalog("chsh-circulant")
        sol = theta(g)
        assert sol.primal_value == pytest.approx(2 + math.sqrt(2), abs=1e-5)
        # Lovasz identity for vertex-transitive graphs: theta(G) theta(~G) = n
        co = theta(complement(g))
        assert sol.primal_value * co.primal_value == pytest.approx(8.0, abs=1e-4)

    def test_k2_gadget_sandwich(self, k2):
        gp = build_two_point_graph(k2).as_graph()
        alpha, th = theta_sandwich(gp)
        assert alpha == 2
        assert th == pytest.approx(2.0, abs=1e-6)

    def test_sandwich_examples(self, c5):
        assert theta_sandwich(c5) == (2, pytest.approx(SQRT5, abs=1e-6))
        assert theta_sandwich(build_graph(3, [])) == (3, pytest.approx(3.0, abs=1e-6))

    def test_single_vertex_shortcut(self):
        sol = theta(build_graph(1, []))
        assert sol.primal_value == 1.0 and sol.iterations == 0
        assert sol.status is SdpStatus.CONVERGED


class TestCertificates:
    def test_duality_gap_within_tolerance(self, c5, petersen):
        for g in (c5, petersen):
            sol = theta(g, tolerance=1e-7)
            assert -1e-9 <= sol.duality_gap <= 1e-7

    def test_feasibility_of_converged_solutions(self):
        rng = np.random.default_rng(99)
        for _ in range(8):
            g = random_graph(rng, int(rng.integers(2, 9)), 0.5)
            sol = theta(g)
            assert sol.status is SdpStatus.CONVERGED
            report = verify_feasibility(g, sol.X, sol.tolerance)
            assert report.passed

    def test_feasibility_flags_edge_violation(self, c5):
        X = np.eye(5) / 5
        X[0, 1] = X[1, 0] = 0.01
        report = verify_feasibility(c5, X, 1e-6)
        assert not report.edges_ok
        assert not report.passed

    def test_feasibility_of_uniform_matrix_on_empty_graph(self):
        g = build_graph(4, [])
        X = np.ones((4, 4)) / 4
        report = verify_feasibility(g, X, 1e-9)
        assert report.passed
        assert report.max_edge_entry == 0.0

    def test_dimension_mismatch(self, c5):
        with pytest.raises(ValueError, match="shape"):
            verify_feasibility(c5, np.eye(4), 1e-7)

    def test_max_iterations_reported_honestly(self, c5):
        sol = theta(c5, max_iterations=1)
        assert sol.status is SdpStatus.MAX_ITERATIONS
        assert sol.iterations == 1


class TestValidation:
    def test_tolerance_range(self, c5):
        for bad in (1e-11, 1e-2, 0.5):
            with pytest.raises(ValueError, match="tolerance"):
                theta(c5, tolerance=bad)

    def test_weighted_rejected(self):
        g = build_graph(2, [(0, 1)], weights={0: 2})
        with pytest.raises(ValueError, match="expand"):
            theta(g)


class TestStructuralProperties:
    def test_sandwich_on_random_graphs(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            g = random_graph(rng, int(rng.integers(2, 10)), 0.5)
            alpha, th = theta_sandwich(g)
            assert alpha <= th + 1e-6

    def test_adding_edges_never_increases_theta(self):
        rng = np.random.default_rng(13)
        for _ in range(6):
            n = int(rng.integers(3, 9))
            g = random_graph(rng, n, 0.4)
            non_edges = [
                (i, j)
                for i in range(n)
                for j in range(i + 1, n)
                if (i, j) not in g.edge_set
            ]
            if not non_edges:
                continue
            extra = non_edges[int(rng.integers(len(non_edges)))]
            denser = build_graph(n, list(g.edges) + [extra])
            assert theta(denser).primal_value <= theta(g).primal_value + 1e-6

    def test_bound_transfer_on_small_graphs(self):
        rng = np.random.default_rng(31)
        for trial in range(8):
            g = random_graph(rng, int(rng.integers(2, 10)), [0.2, 0.5, 0.8][trial % 3])
            gp = build_two_point_graph(g).as_graph()
            dev = abs(
                theta(gp).primal_value - theta(g).primal_value - len(g.edges)
            )
            assert dev <= 1e-6
