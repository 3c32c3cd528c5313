"""
Tests for graph families (tools.graph_generators)
"""

# INPUT:  pytest, tools.graph_generators, core.counting, core.graph
# OUTPUT: 测试函数集
# POSITION: Tests/Unit Tests - 图族生成单元测试

import pytest

from core.counting import count_spanning_trees
from core.errors import InputValidationError
from core.graph import diameter_2approx, zero_weight_tree
from tools.graph_generators import (
    clique,
    cycle,
    generate_graph,
    gnp_connected,
    graph_id,
    grid,
    parse_params,
    tree_plus_k,
)


class TestFamilies:
    """测试各图族的基本性质"""

    def test_cycle(self):
        g = cycle(8)
        assert (g.n, g.m) == (8, 8)
        assert count_spanning_trees(g).exact == 8

    def test_clique(self):
        g = clique(5)
        assert g.m == 10 and g.is_clique()
        assert count_spanning_trees(g).exact == 125

    def test_grid(self):
        g = grid(3, 4)
        assert (g.n, g.m) == (12, 17)
        assert not g.is_clique()

    def test_canonical_edges(self):
        for g in (cycle(6), clique(4), grid(2, 3), tree_plus_k(12, 3, 5)):
            assert list(g.edges) == sorted(g.edges)
            assert all(u < v for u, v in g.edges)

    def test_tree_plus_k(self):
        g = tree_plus_k(20, 4, seed=1)
        assert (g.n, g.m) == (20, 23)
        assert diameter_2approx(g, zero_weight_tree(g)) <= 4

    def test_tree_plus_k_is_seeded(self):
        assert tree_plus_k(15, 3, seed=7).edges == tree_plus_k(15, 3, seed=7).edges

    @pytest.mark.parametrize("k", [0, 10 * 9 // 2 - 9 + 1])
    def test_tree_plus_k_rejects_bad_k(self, k):
        with pytest.raises(InputValidationError):
            tree_plus_k(10, k)

    def test_gnp_connected(self):
        g = gnp_connected(12, 0.4, seed=3)
        assert g.n == 12 and g.m >= 12
        assert count_spanning_trees(g).log_count > 0

    def test_gnp_gives_up(self):
        with pytest.raises(InputValidationError):
            gnp_connected(30, 0.001, seed=0)

    @pytest.mark.parametrize("fn, args", [(cycle, (2,)), (clique, (1,)), (grid, (1, 5))])
    def test_rejects_degenerate_sizes(self, fn, args):
        with pytest.raises(InputValidationError):
            fn(*args)


class TestRegistry:
    """测试按名称生成与参数解析"""

    def test_generate_by_name(self):
        assert generate_graph("cycle", {"n": 5}).edges == cycle(5).edges

    def test_unknown_family(self):
        with pytest.raises(InputValidationError):
            generate_graph("petersen", {})

    def test_bad_params(self):
        with pytest.raises(InputValidationError):
            generate_graph("grid", {"n": 4})

    def test_parse_params(self):
        assert parse_params(["n=8", "p=0.25", "name=x"]) == {"n": 8, "p": 0.25, "name": "x"}
        with pytest.raises(InputValidationError):
            parse_params(["n8"])

    def test_graph_id_is_sorted(self):
        assert graph_id("cycle", {"n": 8}) == "cycle(n=8)"
        assert graph_id("grid", {"rows": 2, "cols": 3}) == "grid(cols=3,rows=2)"
