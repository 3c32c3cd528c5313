"""
summarize_errors: Monte-Carlo 误差统计辅助函数

Summaries of release errors (mean / standard error / tail fractions), total
variation between empirical and exact tree distributions, and the closed-form
utility bounds the experiments compare against.
"""

# INPUT:  pandas, numpy, core.errors, core.state
# OUTPUT: summarize_errors(), total_variation(), tail_fraction(),
#         binomial_standard_error(), utility_bound(), laplace_tail_threshold()
# POSITION: tools 子包 - 实验指标

import math
from typing import Dict, Mapping, Optional, Sequence

import numpy as np
import pandas as pd

from core.errors import InputValidationError
from core.state import NeighborRelation


def summarize_errors(errors: Sequence[float]) -> Dict[str, float]:
    """误差摘要。

    Args:
        errors: Per-trial errors w(T_released) - w(T*)

    Returns:
        dict with count / mean / std / standard_error / max
    """
    series = pd.Series(errors, dtype="float64")
    count = int(series.size)
    if count == 0:
        return {"count": 0, "mean": 0.0, "std": 0.0, "standard_error": 0.0, "max": 0.0}
    std = float(series.std(ddof=1)) if count > 1 else 0.0
    return {
        "count": count,
        "mean": float(series.mean()),
        "std": std,
        "standard_error": std / math.sqrt(count),
        "max": float(series.max()),
    }


def summarize_rows(df: pd.DataFrame) -> pd.DataFrame:
    """Mean error and standard error per (graph, mechanism, relation, epsilon)."""
    keys = ["graph_id", "mechanism", "relation", "epsilon"]
    grouped = df.groupby(keys, sort=True)["error"]
    out = grouped.agg(["count", "mean", "std"]).reset_index()
    out["std"] = out["std"].fillna(0.0)
    out["standard_error"] = out["std"] / np.sqrt(out["count"])
    return out


def total_variation(p: Mapping, q: Mapping) -> float:
    """½ Σ |p(x) − q(x)| over the union of supports."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)


def tail_fraction(errors: Sequence[float], threshold: float) -> float:
    """Fraction of trials whose error strictly exceeds ``threshold``."""
    arr = np.asarray(errors, dtype=np.float64)
    if arr.size == 0:
        return 0.0
    return float(np.mean(arr > threshold))


def binomial_standard_error(p: float, trials: int) -> float:
    if trials <= 0:
        return 0.0
    return math.sqrt(max(p * (1.0 - p), 0.0) / trials)


def utility_bound(
    mechanism: str,
    relation: NeighborRelation,
    epsilon: float,
    n: int,
    diameter: int,
    log_tree_count: float,
    m: Optional[int] = None,
) -> float:
    """
    Expected-error upper bound of a shipped mechanism.

    laplace (l1):   4 D (ln n + 1) / eps
    laplace (linf): 4 m D (ln n + 1) / eps, the l1 bound at noise scale m / eps
    expmech (l1):   2 ln|T(G)| / eps
    expmech (linf): 4 D ln|T(G)| / eps
    """
    relation = NeighborRelation.parse(relation)
    if mechanism == "laplace":
        if relation is NeighborRelation.L1:
            return 4.0 * diameter * (math.log(n) + 1.0) / epsilon
        if m is None:
            raise InputValidationError("The linf Laplace bound needs the edge count m")
        return 4.0 * m * diameter * (math.log(n) + 1.0) / epsilon
    if relation is NeighborRelation.L1:
        return 2.0 * log_tree_count / epsilon
    return 4.0 * diameter * log_tree_count / epsilon


def laplace_tail_threshold(diameter: int, n: int, gamma: float, epsilon: float) -> float:
    """Error level 4 D ln(n / gamma) / eps exceeded with probability at most gamma."""
    return 4.0 * diameter * math.log(n / gamma) / epsilon
