"""
Exact weighted spanning-tree sampling by contraction/deletion.

Edges are decided in ascending id. Each undecided edge e of the current
multigraph M is included with its conditional marginal

    p_e = q_e * treesum(M / e) / treesum(M)

and then contracted (included) or deleted (excluded). The output distribution
is exactly prod_{e in T} q_e / sum_{T'} prod_{e in T'} q_e.
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - numpy (随机数), scipy.special.logsumexp, networkx.utils.UnionFind,
#                   config (数值容差), core.counting (log_tree_sum / 枚举),
#                   core.state (MultiGraph/MultiEdge/SpanningTree), core.errors
# OUTPUT: 对外提供 - SamplerStats, multigraph_from_graph, contract, delete,
#                   tree_sum, is_bridge, inclusion_probability,
#                   sample_spanning_tree, exact_tree_distribution
# POSITION: 系统地位 - Tool/Sampler (工具层-采样引擎)
#                     指数机制的执行引擎
# ============================================================================

import logging
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from networkx.utils import UnionFind
from scipy.special import logsumexp

from config import get_numerics_config
from core.counting import enumerate_spanning_trees, log_tree_sum
from core.errors import InputValidationError, NumericsError
from core.state import Graph, MultiEdge, MultiGraph, SpanningTree

logger = logging.getLogger("tools.tree_sampler")


@dataclass
class SamplerStats:
    """Counters accumulated across sampler calls."""
    samples: int = 0
    draws: int = 0
    clamp_events: int = 0
    max_clamp_excess: float = 0.0


def multigraph_from_graph(graph: Graph, log_q: Sequence[float]) -> MultiGraph:
    """Lift G with per-edge log-factors into the sampler's multigraph state."""
    log_q = np.asarray(log_q, dtype=np.float64)
    if log_q.shape != (graph.m,):
        raise InputValidationError(f"Expected {graph.m} edge factors, got shape {log_q.shape}")
    if not np.all(np.isfinite(log_q)):
        raise InputValidationError("Edge factors must be strictly positive and finite")
    records = tuple(
        MultiEdge(u, v, float(lq), eid) for eid, ((u, v), lq) in enumerate(zip(graph.edges, log_q))
    )
    return MultiGraph(vertex_count=graph.n, records=records)


def tree_sum(multigraph: MultiGraph) -> float:
    """log sum_{T in T(M)} prod_{e in T} q_e (log-determinant of the reduced Laplacian)."""
    if not multigraph.records:
        return log_tree_sum(multigraph.vertex_count, (), (), ())
    us, vs, lqs, _ = zip(*multigraph.records)
    return log_tree_sum(multigraph.vertex_count, us, vs, lqs)


def _relabel(vertex_count: int, keep: int, drop: int) -> List[int]:
    """Vertex map after merging ``drop`` into ``keep``; labels stay contiguous."""
    mapping = []
    for x in range(vertex_count):
        y = keep if x == drop else x
        mapping.append(y - 1 if y > drop else y)
    return mapping


def contract(multigraph: MultiGraph, position: int) -> MultiGraph:
    """M / e: merge the endpoints of record ``position``; resulting self-loops are dropped."""
    edge = multigraph.records[position]
    keep, drop = min(edge.u, edge.v), max(edge.u, edge.v)
    mapping = _relabel(multigraph.vertex_count, keep, drop)
    records = []
    for i, rec in enumerate(multigraph.records):
        if i == position:
            continue
        u, v = mapping[rec.u], mapping[rec.v]
        if u != v:
            records.append(MultiEdge(u, v, rec.log_factor, rec.eid))
    return MultiGraph(vertex_count=multigraph.vertex_count - 1, records=tuple(records))


def delete(multigraph: MultiGraph, position: int) -> MultiGraph:
    """M - e."""
    records = multigraph.records[:position] + multigraph.records[position + 1:]
    return MultiGraph(vertex_count=multigraph.vertex_count, records=records)


def is_bridge(multigraph: MultiGraph, position: int) -> bool:
    """True when deleting record ``position`` disconnects the multigraph."""
    uf = UnionFind(range(multigraph.vertex_count))
    for i, rec in enumerate(multigraph.records):
        if i != position:
            uf.union(rec.u, rec.v)
    return len({uf[x] for x in range(multigraph.vertex_count)}) > 1


def inclusion_probability(
    multigraph: MultiGraph,
    position: int,
    log_total: Optional[float] = None,
) -> float:
    """Unclamped p_e = q_e * treesum(M / e) / treesum(M), evaluated in log-domain."""
    if log_total is None:
        log_total = tree_sum(multigraph)
    edge = multigraph.records[position]
    log_ratio = edge.log_factor + tree_sum(contract(multigraph, position)) - log_total
    return float(np.exp(log_ratio))


def _clamp(p: float, eid: int, stats: Optional[SamplerStats]) -> float:
    tolerance = get_numerics_config()["clamp_tolerance"]
    if 0.0 <= p <= 1.0:
        return p
    excess = max(-p, p - 1.0)
    if excess > tolerance:
        raise NumericsError(f"Inclusion probability {p!r} for edge {eid} is outside [0, 1] beyond tolerance")
    if stats is not None:
        stats.clamp_events += 1
        stats.max_clamp_excess = max(stats.max_clamp_excess, excess)
    logger.debug(f"Clamped p_e={p!r} for edge {eid}")
    return min(max(p, 0.0), 1.0)


def sample_spanning_tree(
    graph: Graph,
    log_q: Sequence[float],
    rng: np.random.Generator,
    stats: Optional[SamplerStats] = None,
) -> SpanningTree:
    """
    Draw T with probability proportional to prod_{e in T} q_e, q_e = exp(log_q[e]).

    Args:
        graph: Public graph
        log_q: Natural-log edge factors aligned with the edge indexing
        rng: Generator; one uniform draw per decided edge, in ascending edge id
        stats: Optional counters (draws, clamp events)

    Returns:
        Sampled spanning tree
    """
    current = multigraph_from_graph(graph, log_q)
    included: List[int] = []

    for eid in range(graph.m):
        if current.vertex_count == 1:
            break
        position = next((i for i, rec in enumerate(current.records) if rec.eid == eid), None)
        if position is None:
            # became a self-loop after an earlier contraction
            continue

        if is_bridge(current, position):
            p = 1.0
        else:
            p = _clamp(inclusion_probability(current, position), eid, stats)

        draw = rng.random()
        if stats is not None:
            stats.draws += 1
        if draw < p:
            included.append(eid)
            current = contract(current, position)
        else:
            current = delete(current, position)

    if stats is not None:
        stats.samples += 1
    if len(included) != graph.n - 1:
        raise NumericsError(f"Sampler produced {len(included)} edges, expected {graph.n - 1}")
    return SpanningTree(tuple(included))


def exact_tree_distribution(
    graph: Graph,
    log_q: Sequence[float],
    trees: Optional[Sequence[SpanningTree]] = None,
) -> Tuple[List[SpanningTree], np.ndarray]:
    """
    Enumerated exact output distribution of the sampler.

    Returns:
        (trees, probabilities) with probabilities aligned to trees
    """
    if trees is None:
        trees = enumerate_spanning_trees(graph)
    log_q = np.asarray(log_q, dtype=np.float64)
    scores = np.array([log_q[list(t.edge_ids)].sum() for t in trees])
    log_probs = scores - logsumexp(scores)
    return list(trees), np.exp(log_probs)


def empirical_distribution(samples: Sequence[SpanningTree]) -> Dict[SpanningTree, float]:
    """Relative frequency of each sampled tree."""
    counts: Dict[SpanningTree, int] = {}
    for tree in samples:
        counts[tree] = counts.get(tree, 0) + 1
    total = len(samples)
    return {tree: c / total for tree, c in counts.items()}
