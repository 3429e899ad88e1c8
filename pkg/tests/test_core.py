import numpy as np
import pytest

from otclust import (
    CostMatrix,
    PointCloud,
    ProbabilityVector,
    TransportPlan,
    build_cost_matrix,
    envelope_value,
    support_cardinality,
)


def random_row_feasible_plan(rng, p0, m=None):
    """Nonnegative plan whose rows sum to p0, with random support."""
    n = p0.size
    m = m or n
    raw = rng.random((n, m)) ** 3
    raw /= raw.sum(axis=1, keepdims=True)
    return raw * p0.weights[:, None]


class TestProbabilityVector:
    def test_uniform(self):
        p = ProbabilityVector.uniform(4)
        assert np.allclose(p.weights, 0.25)
        assert p.norm2() == pytest.approx(0.5)

    def test_small_negative_clamped(self):
        p = ProbabilityVector(np.array([0.5, 0.5, -1e-12]))
        assert p.weights[2] == 0.0
        assert p.weights.sum() == pytest.approx(1.0)

    def test_large_negative_rejected(self):
        with pytest.raises(ValueError):
            ProbabilityVector(np.array([1.5, -0.5]))

    def test_near_one_renormalized(self):
        w = np.array([0.5, 0.5 + 1e-10])
        p = ProbabilityVector(w)
        assert p.weights.sum() == 1.0

    def test_bad_total_rejected(self):
        with pytest.raises(ValueError):
            ProbabilityVector(np.array([0.5, 0.4]))

    def test_immutable(self):
        p = ProbabilityVector.uniform(3)
        with pytest.raises(ValueError):
            p.weights[0] = 1.0


class TestCostMatrix:
    def test_single_cloud_zero_diagonal_exact(self):
        rng = np.random.default_rng(5)
        cloud = PointCloud(rng.normal(size=(7, 3)))
        cost = build_cost_matrix(cloud)
        assert (np.diag(cost.entries) == 0.0).all()
        assert (cost.entries == cost.entries.T).all()

    def test_two_cloud_values(self):
        a = PointCloud([[1.0, 0.0]])
        b = PointCloud([[0.0, 0.0], [2.0, 2.0]])
        cost = build_cost_matrix(a, b)
        assert cost.entries.tolist() == [[1.0, 5.0]]

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            build_cost_matrix(PointCloud([[0.0]]), PointCloud([[0.0, 1.0]]))

    def test_negative_rejected(self):
        with pytest.raises(ValueError):
            CostMatrix(np.array([[0.0, -1.0]]))


class TestTransportPlan:
    def test_row_sum_enforced(self):
        p0 = ProbabilityVector(np.array([0.3, 0.7]))
        with pytest.raises(ValueError):
            TransportPlan(np.array([[0.3, 0.0], [0.3, 0.3]]), p0)

    def test_column_target_checked(self):
        p0 = ProbabilityVector(np.array([0.3, 0.7]))
        p1 = ProbabilityVector(np.array([0.6, 0.4]))
        plan = TransportPlan(np.array([[0.3, 0.0], [0.3, 0.4]]), p0, p1)
        assert plan.column_sums() == pytest.approx([0.6, 0.4])
        with pytest.raises(ValueError):
            TransportPlan(np.array([[0.0, 0.3], [0.3, 0.4]]), p0, p1)

    def test_tiny_negative_clamped(self):
        p0 = ProbabilityVector(np.array([0.5, 0.5]))
        plan = TransportPlan(np.array([[0.5, 1e-13], [-1e-13, 0.5]]), p0)
        assert (plan.entries >= 0).all()


class TestSupportCardinality:
    def test_explicit_threshold(self):
        assert support_cardinality([0.0, 1e-7, 0.2], threshold=1e-6) == 1
        assert support_cardinality([0.0, 1e-7, 0.2], threshold=0.0) == 2

    def test_relative_default(self):
        # default threshold is 1e-6 * max entry magnitude
        assert support_cardinality([1.0, 5e-7, 2e-6]) == 2
        assert support_cardinality(np.zeros(4)) == 0

    def test_negative_threshold_rejected(self):
        with pytest.raises(ValueError):
            support_cardinality([1.0], threshold=-1.0)


class TestEnvelopeValue:
    def test_diagonal_uniform(self):
        # diagonal plan, uniform marginal of size 4: sum of column norms is
        # 4 * 0.25 = 1 and the marginal norm is 0.5, so the value is 2
        p0 = ProbabilityVector.uniform(4)
        plan = TransportPlan(np.diag(p0.weights), p0)
        assert envelope_value(plan) == pytest.approx(2.0)
        assert support_cardinality(plan.column_sums()) == 4

    def test_single_column(self):
        p0 = ProbabilityVector.uniform(4)
        entries = np.zeros((4, 4))
        entries[:, 1] = p0.weights
        assert envelope_value(TransportPlan(entries, p0)) == pytest.approx(1.0)

    def test_lower_bounds_hold_on_random_plans(self):
        rng = np.random.default_rng(11)
        p0 = ProbabilityVector(rng.dirichlet(np.ones(5)))
        scale = p0.norm2()
        for _ in range(1000):
            entries = random_row_feasible_plan(rng, p0)
            plan = TransportPlan(entries, p0)
            value = envelope_value(plan)
            col_norms = np.linalg.norm(entries, axis=0)
            # each column norm bounded by the marginal norm
            assert col_norms.max() <= scale + 1e-9
            # envelope never exceeds the occupied-column count
            assert value <= support_cardinality(plan.column_sums(), 0.0) + 1e-9
            # and never drops below 1
            assert value >= 1.0 - 1e-9

    def test_equality_on_parallel_columns(self):
        rng = np.random.default_rng(3)
        p0 = ProbabilityVector(rng.dirichlet(np.ones(6)))
        alpha = rng.dirichlet(np.ones(6))
        plan = TransportPlan(np.outer(p0.weights, alpha), p0)
        assert envelope_value(plan) == pytest.approx(1.0, abs=1e-12)


class TestPointCloud:
    def test_labels_length_checked(self):
        with pytest.raises(ValueError):
            PointCloud([[0.0], [1.0]], labels=[0])

    def test_shape_checked(self):
        with pytest.raises(ValueError):
            PointCloud(np.zeros((0, 2)))
        with pytest.raises(ValueError):
            PointCloud(np.zeros(3))
