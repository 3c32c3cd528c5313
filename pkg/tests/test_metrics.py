"""
Tests for experiment metrics (tools.metrics)
"""

# INPUT:  pytest, math, pandas, tools.metrics
# OUTPUT: 测试函数集
# POSITION: Tests/Unit Tests - 误差统计与效用上界

import math

import pandas as pd
import pytest

from core.errors import InputValidationError
from tools.metrics import (
    binomial_standard_error,
    laplace_tail_threshold,
    summarize_errors,
    summarize_rows,
    tail_fraction,
    total_variation,
    utility_bound,
)


class TestSummaries:
    """测试误差摘要"""

    def test_summarize_errors(self):
        s = summarize_errors([1.0, 2.0, 3.0])
        assert s["count"] == 3
        assert s["mean"] == pytest.approx(2.0)
        assert s["standard_error"] == pytest.approx(1.0 / math.sqrt(3))
        assert s["max"] == 3.0

    def test_empty_and_single(self):
        assert summarize_errors([])["count"] == 0
        assert summarize_errors([4.0])["std"] == 0.0

    def test_summarize_rows_groups(self):
        df = pd.DataFrame(
            {
                "graph_id": ["g"] * 4,
                "mechanism": ["laplace"] * 4,
                "relation": ["l1"] * 4,
                "epsilon": [1.0, 1.0, 2.0, 2.0],
                "error": [0.0, 2.0, 1.0, 1.0],
            }
        )
        out = summarize_rows(df).set_index("epsilon")
        assert out.loc[1.0, "mean"] == 1.0
        assert out.loc[2.0, "standard_error"] == 0.0


class TestDistances:
    """测试分布距离与尾部比例"""

    def test_total_variation(self):
        assert total_variation({"a": 0.5, "b": 0.5}, {"a": 0.5, "b": 0.5}) == 0.0
        assert total_variation({"a": 1.0}, {"b": 1.0}) == 1.0

    def test_tail_fraction_is_strict(self):
        assert tail_fraction([0.0, 1.0, 2.0, 3.0], 1.0) == 0.5
        assert tail_fraction([], 1.0) == 0.0

    def test_binomial_standard_error(self):
        assert binomial_standard_error(0.25, 100) == pytest.approx(math.sqrt(0.1875 / 100))
        assert binomial_standard_error(0.5, 0) == 0.0


class TestBounds:
    """测试效用上界公式"""

    def test_laplace(self):
        assert utility_bound("laplace", "l1", 2.0, 10, 3, 0.0) == pytest.approx(6 * (math.log(10) + 1))
        assert utility_bound("laplace", "linf", 2.0, 10, 3, 0.0, m=15) == pytest.approx(90 * (math.log(10) + 1))
        with pytest.raises(InputValidationError):
            utility_bound("laplace", "linf", 1.0, 10, 3, 0.0)

    def test_expmech(self):
        assert utility_bound("expmech", "l1", 1.0, 5, 4, math.log(125)) == pytest.approx(2 * math.log(125))
        assert utility_bound("expmech", "linf", 2.0, 8, 1, math.log(8)) == pytest.approx(2 * math.log(8))

    def test_tail_threshold(self):
        assert laplace_tail_threshold(2, 10, 0.1, 1.0) == pytest.approx(8 * math.log(100))
