"""
The two epsilon-DP mechanisms for releasing a minimum spanning tree.

- Laplace mechanism: perturb every edge weight with Lap(b) (b = 1/eps under l1,
  b = m/eps under linf) and return the MST of the noisy weights.
- Exponential mechanism: sample T with probability proportional to
  exp(-lambda * w(T)), lambda = eps/2 under l1 and eps/(4 R0) under linf, through
  the exact contraction/deletion sampler.

Both are fully determined by (inputs, cfg.seed).
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - numpy (Generator/SeedSequence, 噪声), scipy.special.logsumexp,
#                   core.graph (mst / tree_weight / diameter_2approx),
#                   tools.tree_sampler (精确采样), core.state
# OUTPUT: 对外提供 - make_rng, trial_seed, sample_laplace, laplace_scale,
#                   laplace_mechanism, exponential_lambda, exponential_log_factors,
#                   exponential_mechanism, mechanism_log_distribution,
#                   release, release_error, MECHANISMS
# POSITION: 系统地位 - Tool/Mechanism (工具层-隐私机制)
#                     CLI release / 实验 / 下界压力测试的共同入口
# ============================================================================

import logging
from functools import lru_cache
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from scipy.special import logsumexp

from core.counting import enumerate_spanning_trees
from core.errors import InputValidationError
from core.graph import as_weights, diameter_2approx, mst, tree_weight, zero_weight_tree
from core.state import Graph, MechanismConfig, NeighborRelation, SpanningTree, WeightVector
from tools.tree_sampler import SamplerStats, sample_spanning_tree

logger = logging.getLogger("tools.mechanisms")


def make_rng(seed: int) -> np.random.Generator:
    """Named seedable generator (PCG64) for one release."""
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed))))


def trial_seed(root_seed: int, index: int) -> int:
    """Independent 64-bit seed for stream ``index`` under ``root_seed``."""
    state = np.random.SeedSequence([int(root_seed), int(index)]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def sample_laplace(b: float, rng: np.random.Generator, size: Optional[int] = None):
    """
    Lap(b) by inverse CDF: u uniform in (-1/2, 1/2], x = -b * sign(u) * ln(1 - 2|u|).

    Returns a float, or an array of ``size`` draws consumed in order.
    """
    if not b > 0:
        raise InputValidationError(f"Laplace scale must be positive, got {b}")
    u = 0.5 - rng.random(size)
    with np.errstate(divide="ignore"):
        x = -b * np.sign(u) * np.log(1.0 - 2.0 * np.abs(u))
    return float(x) if size is None else x


def laplace_scale(graph: Graph, cfg: MechanismConfig) -> float:
    """b = 1/eps for l1, m/eps for linf."""
    if cfg.relation is NeighborRelation.L1:
        return 1.0 / cfg.epsilon
    return graph.m / cfg.epsilon


def laplace_mechanism(graph: Graph, w: WeightVector, cfg: MechanismConfig) -> SpanningTree:
    """MST of the Laplace-perturbed weights."""
    w = as_weights(graph, w)
    noise = sample_laplace(laplace_scale(graph, cfg), make_rng(cfg.seed), size=graph.m)
    return mst(graph, w + noise)


@lru_cache(maxsize=256)
def reference_radius(graph: Graph) -> int:
    """R0 measured from the zero-weight MST T0."""
    return diameter_2approx(graph, zero_weight_tree(graph))


def exponential_lambda(graph: Graph, cfg: MechanismConfig) -> float:
    """lambda = eps/2 for l1, eps/(4 R0) for linf."""
    if cfg.relation is NeighborRelation.L1:
        return cfg.epsilon / 2.0
    return cfg.epsilon / (4.0 * reference_radius(graph))


def exponential_log_factors(graph: Graph, w: WeightVector, cfg: MechanismConfig) -> np.ndarray:
    """log q_e = -lambda * (w(e) - min w); the shift leaves the tree distribution unchanged."""
    w = as_weights(graph, w)
    return -exponential_lambda(graph, cfg) * (w - w.min())


def exponential_mechanism(
    graph: Graph,
    w: WeightVector,
    cfg: MechanismConfig,
    stats: Optional[SamplerStats] = None,
) -> SpanningTree:
    """Sample T with probability proportional to exp(-lambda * w(T))."""
    log_q = exponential_log_factors(graph, w, cfg)
    return sample_spanning_tree(graph, log_q, make_rng(cfg.seed), stats=stats)


def mechanism_log_distribution(
    graph: Graph,
    w: WeightVector,
    cfg: MechanismConfig,
    trees: Optional[Sequence[SpanningTree]] = None,
) -> Tuple[list, np.ndarray]:
    """
    Exact log-probabilities of the exponential mechanism over enumerated trees.

    Computed directly from -lambda * w(T) (no shift), so it doubles as the
    reference for the shift-invariance checks.
    """
    if trees is None:
        trees = enumerate_spanning_trees(graph)
    w = as_weights(graph, w)
    lam = exponential_lambda(graph, cfg)
    scores = np.array([-lam * w[list(t.edge_ids)].sum() for t in trees])
    return list(trees), scores - logsumexp(scores)


MECHANISMS: Dict[str, Callable[[Graph, WeightVector, MechanismConfig], SpanningTree]] = {
    "laplace": laplace_mechanism,
    "expmech": exponential_mechanism,
}


def release(graph: Graph, w: WeightVector, mechanism: str, cfg: MechanismConfig) -> SpanningTree:
    """Dispatch a release by mechanism identifier ('laplace' or 'expmech')."""
    try:
        fn = MECHANISMS[mechanism]
    except KeyError:
        raise InputValidationError(f"Unknown mechanism {mechanism!r} (expected one of {sorted(MECHANISMS)})")
    return fn(graph, w, cfg)


def release_error(graph: Graph, w: WeightVector, tree: SpanningTree, optimum: Optional[float] = None) -> float:
    """w(T_released) - w(T*)."""
    if optimum is None:
        optimum = tree_weight(w, mst(graph, w))
    return tree_weight(w, tree) - optimum
