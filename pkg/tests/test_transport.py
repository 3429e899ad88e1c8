import itertools

import numpy as np
import pytest

from otclust import (
    CostMatrix,
    PointCloud,
    ProbabilityVector,
    build_cost_matrix,
    northwest_corner,
    solve_transport,
    transport_cost,
    wasserstein2,
)

from oracles import permutation_transport_cost


class TestSolveTransport:
    def test_identity_is_free(self):
        # moving a distribution onto itself over a zero-diagonal cost is free
        p = ProbabilityVector(np.array([0.2, 0.3, 0.5]))
        cloud = PointCloud([[0.0], [1.0], [3.0]])
        cost = build_cost_matrix(cloud)
        result = solve_transport(cost, p, p)
        assert result.report.objective == pytest.approx(0.0, abs=1e-12)
        assert result.report.status == "optimal"

    def test_two_by_two_grid_verified(self):
        # single free parameter a = plan[0, 0]; the 1e-4 scan over it lands
        # on cost 1.6 with the plan below
        p0 = ProbabilityVector(np.array([0.3, 0.7]))
        p1 = ProbabilityVector(np.array([0.6, 0.4]))
        cost = CostMatrix(np.array([[1.0, 2.0], [3.0, 1.0]]))
        grid = np.arange(0.0, 0.3 + 1e-12, 1e-4)
        values = [
            transport_cost(cost, np.array([[a, 0.3 - a], [0.6 - a, 0.1 + a]]))
            for a in grid
        ]
        oracle = min(values)
        result = solve_transport(cost, p0, p1)
        assert result.report.objective == pytest.approx(1.6, abs=1e-9)
        assert result.report.objective == pytest.approx(oracle, abs=1e-4)
        assert result.plan.entries == pytest.approx(
            np.array([[0.3, 0.0], [0.3, 0.4]]), abs=1e-9
        )

    def test_matches_permutation_oracle(self):
        rng = np.random.default_rng(42)
        for n in (3, 4, 5, 6):
            for _ in range(10):
                pts = rng.random((n, 2))
                cost = build_cost_matrix(PointCloud(pts))
                u = ProbabilityVector.uniform(n)
                got = solve_transport(cost, u, u).report.objective
                want = permutation_transport_cost(cost.entries)
                assert got == pytest.approx(want, abs=1e-9)

    def test_marginals_satisfied(self):
        rng = np.random.default_rng(8)
        p0 = ProbabilityVector(rng.dirichlet(np.ones(5)))
        p1 = ProbabilityVector(rng.dirichlet(np.ones(7)))
        cost = CostMatrix(rng.random((5, 7)))
        plan = solve_transport(cost, p0, p1).plan
        assert plan.row_sums() == pytest.approx(p0.weights, abs=1e-9)
        assert plan.column_sums() == pytest.approx(p1.weights, abs=1e-9)

    def test_size_mismatch_rejected(self):
        cost = CostMatrix(np.ones((2, 3)))
        p2 = ProbabilityVector.uniform(2)
        with pytest.raises(ValueError):
            solve_transport(cost, p2, p2)


class TestWasserstein2:
    def test_identical_clouds(self):
        pts = PointCloud([[0.0, 0.0], [1.0, 2.0]])
        cost, metric = wasserstein2(pts, pts)
        assert cost == pytest.approx(0.0, abs=1e-12)
        assert metric == pytest.approx(0.0, abs=1e-6)

    def test_point_masses_at_distance_five(self):
        a = PointCloud([[0.0, 0.0]])
        b = PointCloud([[3.0, 4.0]])
        cost, metric = wasserstein2(a, b)
        assert cost == pytest.approx(25.0)
        assert metric == pytest.approx(5.0)

    def test_symmetry_and_triangle_inequality(self):
        rng = np.random.default_rng(23)
        for _ in range(10):
            clouds = [PointCloud(rng.random((4, 2))) for _ in range(3)]
            d = {}
            for i, j in itertools.permutations(range(3), 2):
                d[i, j] = wasserstein2(clouds[i], clouds[j])[1]
            for i, j in itertools.combinations(range(3), 2):
                assert d[i, j] == pytest.approx(d[j, i], abs=1e-9)
            assert d[0, 2] <= d[0, 1] + d[1, 2] + 1e-7


class TestNorthwestCorner:
    def test_worked_two_by_two(self):
        p0 = ProbabilityVector(np.array([0.3, 0.7]))
        p1 = ProbabilityVector(np.array([0.6, 0.4]))
        plan = northwest_corner(p0, p1)
        assert plan.entries == pytest.approx(np.array([[0.3, 0.0], [0.3, 0.4]]))

    def test_feasible_and_sparse(self):
        rng = np.random.default_rng(31)
        for _ in range(50):
            n, m = rng.integers(1, 8, size=2)
            p0 = ProbabilityVector(rng.dirichlet(np.ones(n)))
            p1 = ProbabilityVector(rng.dirichlet(np.ones(m)))
            plan = northwest_corner(p0, p1)
            assert (plan.entries > 0).sum() <= n + m - 1
            assert plan.row_sums() == pytest.approx(p0.weights, abs=1e-9)
            assert plan.column_sums() == pytest.approx(p1.weights, abs=1e-9)

    def test_never_beats_the_optimum(self):
        rng = np.random.default_rng(4)
        for _ in range(20):
            cost = CostMatrix(rng.random((4, 4)))
            p0 = ProbabilityVector(rng.dirichlet(np.ones(4)))
            p1 = ProbabilityVector(rng.dirichlet(np.ones(4)))
            greedy = transport_cost(cost, northwest_corner(p0, p1).entries)
            best = solve_transport(cost, p0, p1).report.objective
            assert greedy >= best - 1e-9
