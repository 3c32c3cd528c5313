"""
Tests for exact privacy audits (tools.privacy_audit)
"""

# INPUT:  pytest, numpy, math, tools.privacy_audit
# OUTPUT: 测试函数集
# POSITION: Tests/Unit Tests - 隐私审计单元测试

import math

import numpy as np
import pytest

from core.errors import InputValidationError
from core.graph import build_graph
from core.state import MechanismConfig
from tools.graph_generators import clique, cycle
from tools.mechanisms import make_rng
from tools.privacy_audit import (
    audit_exponential,
    audit_laplace,
    audit_mechanism,
    neighbor_directions,
)


@pytest.fixture
def triangle():
    return build_graph(3, [(0, 1), (1, 2), (0, 2)])


class TestDirections:
    """测试邻接方向采样"""

    def test_l1_directions_have_unit_norm(self):
        dirs = neighbor_directions(6, "l1", 20, make_rng(0))
        assert len(dirs) == 20 + 2 * 6
        for d in dirs:
            assert np.abs(d).sum() == pytest.approx(1.0, abs=1e-12)

    def test_linf_directions_have_unit_norm(self):
        dirs = neighbor_directions(6, "linf", 20, make_rng(0))
        assert len(dirs) == 20 + 2 * 6 + 2
        for d in dirs:
            assert np.abs(d).max() == pytest.approx(1.0)
        assert any(np.array_equal(d, np.ones(6)) for d in dirs)


class TestExponentialAudit:
    """测试指数机制的精确审计"""

    def test_triangle_single_edge_shift(self, triangle):
        cfg = MechanismConfig(1.0, "l1")
        report = audit_exponential(triangle, np.zeros(3), cfg, directions=[np.array([1.0, 0.0, 0.0])])
        assert 1.0 < report["max_ratio"] <= math.e * (1 + 1e-9)
        assert report["passed"]

    def test_zero_shift_gives_unit_ratio(self, triangle):
        report = audit_exponential(triangle, np.zeros(3), MechanismConfig(1.0), directions=[np.zeros(3)])
        assert report["max_ratio"] == pytest.approx(1.0)

    @pytest.mark.parametrize("graph", [clique(4), cycle(5)], ids=["K4", "C5"])
    @pytest.mark.parametrize("eps", [0.1, 1.0, 2.0])
    @pytest.mark.parametrize("relation", ["l1", "linf"])
    def test_passes_on_small_graphs(self, graph, eps, relation):
        w = make_rng(3).uniform(0, 1, size=graph.m)
        report = audit_mechanism(graph, w, "expmech", MechanismConfig(eps, relation, seed=1), direction_count=30)
        assert report["passed"]
        assert report["max_ratio"] <= math.exp(eps) * (1 + 1e-9)

    def test_overscaled_lambda_fails(self, triangle, monkeypatch):
        monkeypatch.setattr("tools.privacy_audit.exponential_lambda", lambda graph, cfg: 10.0 * cfg.epsilon)
        report = audit_exponential(triangle, np.zeros(3), MechanismConfig(1.0), direction_count=5)
        assert not report["passed"]
        assert report["max_ratio"] > math.e


class TestLaplaceAudit:
    """测试 Laplace 噪声校准审计"""

    @pytest.mark.parametrize("relation", ["l1", "linf"])
    def test_ratio_reaches_e_eps(self, relation):
        g = clique(4)
        report = audit_laplace(g, MechanismConfig(0.7, relation), direction_count=10)
        assert report["max_ratio"] == pytest.approx(math.exp(0.7), rel=1e-12)
        assert report["passed"]

    def test_dispatch_validates_weights(self):
        with pytest.raises(InputValidationError):
            audit_mechanism(clique(4), np.zeros(3), "laplace", MechanismConfig(1.0))


class TestAuditDispatch:
    """测试审计入口"""

    def test_unknown_mechanism(self):
        with pytest.raises(InputValidationError):
            audit_mechanism(clique(4), np.zeros(6), "gaussian", MechanismConfig(1.0))

    def test_negative_direction_count(self):
        with pytest.raises(InputValidationError):
            audit_mechanism(clique(4), np.zeros(6), "expmech", MechanismConfig(1.0), direction_count=-1)

    def test_report_fields(self):
        report = audit_mechanism(cycle(5), np.zeros(5), "expmech", MechanismConfig(1.0, "linf"), direction_count=4)
        assert report["mechanism"] == "expmech"
        assert report["relation"] == "linf"
        assert report["directions"] == 4 + 2 * 5 + 2
