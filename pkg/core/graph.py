"""
Graph core: construction, deterministic MST, the Hamming metric on spanning
trees, indicator weights and the linear 2-approximation of the tree-space
diameter.
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - numpy (权重向量), networkx (连通性检查, UnionFind),
#                   core.state (Graph/SpanningTree/WeightVector), core.errors
# OUTPUT: 对外提供 - build_graph, as_weights, make_tree, mst, tree_weight,
#                   hamming_distance, indicator_weights, farthest_tree,
#                   diameter_2approx, zero_weight_tree
# POSITION: 系统地位 - Core/Graph (核心层-图模型)
#                     所有机制与下界构造的基础运算
# ============================================================================

import logging
from typing import Iterable, Sequence

import networkx as nx
import numpy as np
from networkx.utils import UnionFind

from core.errors import InputValidationError
from core.state import Graph, SpanningTree, WeightVector

logger = logging.getLogger("core.graph")


def build_graph(n: int, edges: Iterable[Sequence[int]]) -> Graph:
    """
    Validate and build the public graph G.

    Args:
        n: Vertex count (>= 2)
        edges: Vertex pairs; the given order becomes the edge indexing

    Returns:
        Validated Graph

    Raises:
        InputValidationError: self-loop, duplicate edge, out-of-range vertex,
            disconnected graph, or a graph that is itself a tree
    """
    if int(n) != n or n < 2:
        raise InputValidationError(f"Vertex count must be an integer >= 2, got {n}")
    n = int(n)

    pairs = []
    seen = set()
    for idx, pair in enumerate(edges):
        if len(pair) != 2:
            raise InputValidationError(f"Edge {idx} is not a vertex pair: {pair!r}")
        u, v = int(pair[0]), int(pair[1])
        if not (0 <= u < n and 0 <= v < n):
            raise InputValidationError(f"Edge {idx} ({u}, {v}) references a vertex outside [0, {n})")
        if u == v:
            raise InputValidationError(f"Edge {idx} is a self-loop on vertex {u}")
        key = frozenset((u, v))
        if key in seen:
            raise InputValidationError(f"Edge {idx} ({u}, {v}) duplicates an earlier edge")
        seen.add(key)
        pairs.append((u, v))

    graph = Graph(n=n, edges=tuple(pairs))
    if not nx.is_connected(graph.to_networkx()):
        raise InputValidationError("Graph is disconnected")
    if graph.m < n:
        raise InputValidationError(
            f"Graph with n={n} and m={graph.m} is a tree; at least one extra edge is required"
        )

    logger.debug(f"Built graph n={n} m={graph.m}")
    return graph


def as_weights(graph: Graph, w: Iterable[float]) -> WeightVector:
    """Validate a weight vector against the graph's edge indexing."""
    arr = np.asarray(list(w) if not isinstance(w, np.ndarray) else w, dtype=np.float64)
    if arr.ndim != 1 or arr.shape[0] != graph.m:
        raise InputValidationError(f"Weight vector must have length m={graph.m}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputValidationError("Weight vector contains non-finite entries")
    return arr


def make_tree(graph: Graph, edge_ids: Iterable[int]) -> SpanningTree:
    """
    Validate an edge set as a spanning tree of the graph.

    Raises:
        InputValidationError: wrong size, unknown edge id, or a cycle
    """
    ids = sorted(set(int(e) for e in edge_ids))
    if len(ids) != graph.n - 1:
        raise InputValidationError(f"A spanning tree has {graph.n - 1} edges, got {len(ids)}")
    uf = UnionFind(range(graph.n))
    for e in ids:
        if not 0 <= e < graph.m:
            raise InputValidationError(f"Edge id {e} outside [0, {graph.m})")
        u, v = graph.edges[e]
        if uf[u] == uf[v]:
            raise InputValidationError(f"Edge set contains a cycle through edge {e}")
        uf.union(u, v)
    return SpanningTree(tuple(ids))


def mst(graph: Graph, w: WeightVector) -> SpanningTree:
    """
    Minimum spanning tree by Kruskal over (weight, edge index) order.

    Ties prefer the lower edge index, so the result is a pure function of (G, w).
    """
    w = as_weights(graph, w)
    order = np.argsort(w, kind="stable")
    uf = UnionFind(range(graph.n))
    chosen = []
    for e in order:
        u, v = graph.edges[int(e)]
        if uf[u] != uf[v]:
            uf.union(u, v)
            chosen.append(int(e))
            if len(chosen) == graph.n - 1:
                break
    return SpanningTree(tuple(chosen))


def tree_weight(w: WeightVector, tree: SpanningTree) -> float:
    """w(T): sum of the tree's edge weights."""
    return float(np.sum(np.asarray(w, dtype=np.float64)[list(tree.edge_ids)]))


def hamming_distance(t1: SpanningTree, t2: SpanningTree) -> int:
    """d_H(T1, T2) = |T1 \\ T2|."""
    return len(t1.edge_set - t2.edge_set)


def indicator_weights(graph: Graph, tree: SpanningTree) -> WeightVector:
    """1_T: 0 on edges of T, 1 elsewhere."""
    w = np.ones(graph.m, dtype=np.float64)
    w[list(tree.edge_ids)] = 0.0
    return w


def farthest_tree(graph: Graph, t0: SpanningTree) -> SpanningTree:
    """The MST of (G, -1_{T0}); it maximises d_H(T0, .) over all spanning trees."""
    return mst(graph, -indicator_weights(graph, t0))


def diameter_2approx(graph: Graph, t0: SpanningTree) -> int:
    """
    R0 = max_T d_H(T0, T), computed with one MST call.

    Satisfies D/2 <= R0 <= D for D the tree-space diameter.
    """
    r0 = hamming_distance(t0, farthest_tree(graph, t0))
    logger.debug(f"R0={r0} from T0={t0.format()}")
    return r0


def zero_weight_tree(graph: Graph) -> SpanningTree:
    """The deterministic reference tree T0: the MST under all-zero weights."""
    return mst(graph, np.zeros(graph.m))
