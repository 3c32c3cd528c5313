"""
Tests for the private MST mechanisms (tools.mechanisms)
"""

# INPUT:  pytest, numpy, math, tools.mechanisms, core.graph, core.counting
# OUTPUT: 测试函数集
# POSITION: Tests/Unit Tests - Laplace 机制与指数机制单元测试

import math

import numpy as np
import pytest

from core.counting import count_spanning_trees
from core.errors import InputValidationError
from core.graph import build_graph, mst, tree_weight
from core.state import MechanismConfig, NeighborRelation
from tools.graph_generators import clique, cycle, grid, tree_plus_k
from tools.mechanisms import (
    exponential_lambda,
    exponential_log_factors,
    exponential_mechanism,
    laplace_mechanism,
    laplace_scale,
    make_rng,
    mechanism_log_distribution,
    release,
    release_error,
    sample_laplace,
    trial_seed,
)
from tools.metrics import summarize_errors


@pytest.fixture
def k5():
    return clique(5)


@pytest.fixture
def uniform_weights():
    def build(graph, seed=0):
        return make_rng(seed).uniform(0.0, 1.0, size=graph.m)
    return build


class TestMechanismConfig:
    """测试机制参数校验"""

    @pytest.mark.parametrize("eps", [0.0, -1.0, math.inf, math.nan])
    def test_rejects_bad_epsilon(self, eps):
        with pytest.raises(InputValidationError):
            MechanismConfig(epsilon=eps)

    def test_parses_relation(self):
        assert MechanismConfig(1.0, "LINF").relation is NeighborRelation.LINF
        with pytest.raises(InputValidationError):
            MechanismConfig(1.0, "l2")

    def test_rejects_bad_seed(self):
        with pytest.raises(InputValidationError):
            MechanismConfig(1.0, seed=-1)


class TestRandomness:
    """测试随机流"""

    def test_laplace_moments(self):
        draws = sample_laplace(2.0, make_rng(1), size=40_000)
        assert abs(draws.mean()) < 0.05
        assert np.abs(draws).mean() == pytest.approx(2.0, rel=0.03)

    def test_scalar_draw(self):
        assert isinstance(sample_laplace(1.0, make_rng(0)), float)

    def test_rejects_bad_scale(self):
        with pytest.raises(InputValidationError):
            sample_laplace(0.0, make_rng(0))

    def test_trial_seeds_distinct(self):
        seeds = {trial_seed(7, i) for i in range(1000)}
        assert len(seeds) == 1000
        assert trial_seed(7, 3) == trial_seed(7, 3)


class TestCalibration:
    """测试噪声尺度与 lambda"""

    def test_laplace_scale(self, k5):
        assert laplace_scale(k5, MechanismConfig(2.0, "l1")) == 0.5
        assert laplace_scale(k5, MechanismConfig(2.0, "linf")) == k5.m / 2.0

    def test_exponential_lambda(self, k5):
        assert exponential_lambda(k5, MechanismConfig(1.0, "l1")) == 0.5
        assert exponential_lambda(cycle(6), MechanismConfig(1.0, "linf")) == 0.25
        # star-shaped zero-weight tree on K4 gives R0 = 2
        assert exponential_lambda(clique(4), MechanismConfig(1.0, "linf")) == 0.125

    def test_log_factors_are_non_positive(self, k5, uniform_weights):
        lq = exponential_log_factors(k5, uniform_weights(k5) + 3.0, MechanismConfig(1.0))
        assert lq.max() == 0.0
        assert (lq <= 0).all()


class TestLaplaceMechanism:
    """测试 Laplace 机制"""

    def test_deterministic_given_seed(self, k5, uniform_weights):
        w = uniform_weights(k5)
        cfg = MechanismConfig(1.0, "l1", seed=42)
        assert laplace_mechanism(k5, w, cfg) == laplace_mechanism(k5, w, cfg)

    def test_output_varies_across_seeds(self, k5):
        outputs = {laplace_mechanism(k5, np.zeros(k5.m), MechanismConfig(1.0, seed=s)) for s in range(30)}
        assert len(outputs) > 1

    def test_huge_epsilon_returns_exact_mst(self, k5, uniform_weights):
        w = uniform_weights(k5)
        assert laplace_mechanism(k5, w, MechanismConfig(1e9)) == mst(k5, w)

    @pytest.mark.parametrize("graph", [cycle(64), tree_plus_k(20, 4, 0)], ids=["C64", "tree+4"])
    def test_expected_error_bound(self, graph, uniform_weights):
        w = uniform_weights(graph)
        d = 1 if graph.m == graph.n else 4
        errors = [
            release_error(graph, w, laplace_mechanism(graph, w, MechanismConfig(1.0, seed=trial_seed(0, t))))
            for t in range(2000)
        ]
        summary = summarize_errors(errors)
        assert summary["mean"] <= 4 * d * (math.log(graph.n) + 1) + 3 * summary["standard_error"]


class TestExponentialMechanism:
    """测试指数机制"""

    def test_deterministic_given_seed(self, k5, uniform_weights):
        w = uniform_weights(k5)
        cfg = MechanismConfig(1.0, "linf", seed=5)
        assert exponential_mechanism(k5, w, cfg) == exponential_mechanism(k5, w, cfg)

    def test_shift_invariance(self, k5, uniform_weights):
        w = uniform_weights(k5)
        cfg = MechanismConfig(1.0)
        _, base = mechanism_log_distribution(k5, w, cfg)
        _, shifted = mechanism_log_distribution(k5, w + 12.5, cfg)
        np.testing.assert_allclose(base, shifted, atol=1e-12)
        np.testing.assert_allclose(
            exponential_log_factors(k5, w, cfg), exponential_log_factors(k5, w + 12.5, cfg), atol=1e-12
        )

    def test_scale_invariance(self, k5, uniform_weights):
        w = uniform_weights(k5)
        _, base = mechanism_log_distribution(k5, w, MechanismConfig(1.0))
        _, scaled = mechanism_log_distribution(k5, 4.0 * w, MechanismConfig(0.25))
        np.testing.assert_allclose(base, scaled, atol=1e-12)

    def test_triangle_distribution(self):
        triangle = build_graph(3, [(0, 1), (1, 2), (0, 2)])
        trees, log_probs = mechanism_log_distribution(triangle, np.array([0.0, 0.0, 1.0]), MechanismConfig(2.0))
        assert [t.edge_ids for t in trees] == [(0, 1), (0, 2), (1, 2)]
        z = 1.0 + 2.0 / math.e
        np.testing.assert_allclose(np.exp(log_probs), [1.0 / z, 1.0 / (math.e * z), 1.0 / (math.e * z)], atol=1e-12)
        np.testing.assert_allclose(np.exp(log_probs), [0.576, 0.212, 0.212], atol=1e-3)

    def test_large_weight_gap_samples(self):
        g = build_graph(4, [(0, 1), (1, 2), (0, 2), (0, 3), (1, 3)])
        w = np.array([0.0, 0.0, 0.0, 1000.0, 1000.0])
        for seed in range(20):
            tree = exponential_mechanism(g, w, MechanismConfig(2.0, "l1", seed=seed))
            assert len({3, 4} & tree.edge_set) == 1

    @pytest.mark.parametrize("graph", [clique(5), grid(3, 3)], ids=["K5", "grid3x3"])
    def test_exact_expected_error_bound_l1(self, graph, uniform_weights):
        w = uniform_weights(graph)
        trees, log_probs = mechanism_log_distribution(graph, w, MechanismConfig(1.0))
        optimum = tree_weight(w, mst(graph, w))
        expected = sum(math.exp(lp) * (tree_weight(w, t) - optimum) for t, lp in zip(trees, log_probs))
        assert expected <= 2 * count_spanning_trees(graph).log_count

    def test_sampled_error_bound_linf(self, uniform_weights):
        graph = cycle(8)
        w = uniform_weights(graph)
        errors = [
            release_error(graph, w, exponential_mechanism(graph, w, MechanismConfig(1.0, "linf", seed=trial_seed(1, t))))
            for t in range(1000)
        ]
        summary = summarize_errors(errors)
        assert summary["mean"] <= 4 * 1 * math.log(8) + 3 * summary["standard_error"]


class TestRelease:
    """测试发布入口"""

    def test_dispatch(self, k5, uniform_weights):
        w = uniform_weights(k5)
        cfg = MechanismConfig(1.0, seed=3)
        assert release(k5, w, "laplace", cfg) == laplace_mechanism(k5, w, cfg)
        assert release(k5, w, "expmech", cfg) == exponential_mechanism(k5, w, cfg)

    def test_unknown_mechanism(self, k5):
        with pytest.raises(InputValidationError):
            release(k5, np.zeros(k5.m), "gaussian", MechanismConfig(1.0))

    def test_error_is_non_negative(self, k5, uniform_weights):
        w = uniform_weights(k5)
        assert release_error(k5, w, mst(k5, w)) == 0.0
        for s in range(10):
            assert release_error(k5, w, release(k5, w, "expmech", MechanismConfig(1.0, seed=s))) >= 0.0
