"""
Exact oracles on the space of spanning trees.

Matrix-tree counts (log-domain and exact integers), backtracking enumeration,
and the brute-force tree-space diameter. Audits and tests rely on these as
ground truth, so every exhaustive routine is protected by the enumeration guard.
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - numpy (Laplacian/slogdet, 关联矩阵), networkx.utils.UnionFind,
#                   config (枚举上限), core.state, core.errors
# OUTPUT: 对外提供 - log_tree_sum, count_spanning_trees, enumerate_spanning_trees,
#                   incidence_matrix, pairwise_overlap_extremes, diameter_exact,
#                   reference_diameter, tree_count_log_bounds
# POSITION: 系统地位 - Core/Oracles (核心层-精确计数与枚举)
#                     审计、测试与下界构造的真值来源
# ============================================================================

import logging
import math
from typing import List, Optional, Sequence, Tuple

import numpy as np
from networkx.utils import UnionFind

from config import get_guard_config
from core.errors import GuardExceededError, NumericsError
from core.graph import diameter_2approx, zero_weight_tree
from core.state import Graph, SpanningTree, TreeCount

logger = logging.getLogger("core.counting")


def log_tree_sum(
    vertex_count: int,
    us: Sequence[int],
    vs: Sequence[int],
    log_factors: Sequence[float],
) -> float:
    """
    log of sum_T prod_{e in T} q_e via the weighted matrix-tree theorem.

    The Laplacian is scaled symmetrically per vertex in log-space: with
    s_x = log(weighted degree of x) / 2 the entries become
    exp(log q_uv - s_u - s_v) <= 1 and every diagonal entry is exactly 1, so
    no vertex loses its incident mass to underflow however wide the factor
    spread. det(S L S) = det(S)^2 det(L) puts sum_{x >= 1} 2 s_x back.

    Raises:
        NumericsError: the reduced Laplacian is singular (disconnected multigraph)
    """
    if vertex_count == 1:
        return 0.0
    if len(log_factors) == 0:
        raise NumericsError(f"Multigraph on {vertex_count} vertices has no edges")

    lf = np.asarray(log_factors, dtype=np.float64)
    u = np.asarray(us, dtype=np.intp)
    v = np.asarray(vs, dtype=np.intp)

    log_degree = np.full(vertex_count, -np.inf)
    np.logaddexp.at(log_degree, u, lf)
    np.logaddexp.at(log_degree, v, lf)
    if not np.all(np.isfinite(log_degree)):
        isolated = np.flatnonzero(~np.isfinite(log_degree)).tolist()
        raise NumericsError(f"Vertices {isolated} have no incident edges; multigraph is disconnected")
    half = 0.5 * log_degree
    q = np.exp(lf - half[u] - half[v])

    lap = np.zeros((vertex_count, vertex_count), dtype=np.float64)
    np.add.at(lap, (u, v), -q)
    np.add.at(lap, (v, u), -q)
    np.fill_diagonal(lap, 1.0)

    sign, logdet = np.linalg.slogdet(lap[1:, 1:])
    if sign <= 0 or not np.isfinite(logdet):
        raise NumericsError(
            f"Reduced Laplacian is singular (sign={sign}, logdet={logdet}); multigraph is disconnected"
        )
    return float(logdet) + float(log_degree[1:].sum())


def _bareiss_determinant(matrix: List[List[int]]) -> int:
    """Fraction-free Gaussian elimination; exact for integer matrices."""
    a = [row[:] for row in matrix]
    size = len(a)
    if size == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(size - 1):
        if a[k][k] == 0:
            pivot = next((i for i in range(k + 1, size) if a[i][k] != 0), None)
            if pivot is None:
                return 0
            a[k], a[pivot] = a[pivot], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _laplacian_minor(graph: Graph) -> List[List[int]]:
    lap = [[0] * graph.n for _ in range(graph.n)]
    for u, v in graph.edges:
        lap[u][u] += 1
        lap[v][v] += 1
        lap[u][v] -= 1
        lap[v][u] -= 1
    return [row[1:] for row in lap[1:]]


def count_spanning_trees(graph: Graph) -> TreeCount:
    """
    |T(G)| by Kirchhoff's theorem.

    Returns:
        TreeCount with the natural log of the count, plus the exact integer
        (Bareiss elimination) when n is within the exact-count limit
    """
    exact_limit = get_guard_config()["exact_count_max_vertices"]
    if graph.n <= exact_limit:
        exact = _bareiss_determinant(_laplacian_minor(graph))
        return TreeCount(log_count=math.log(exact), exact=exact)

    us, vs = zip(*graph.edges)
    log_count = log_tree_sum(graph.n, us, vs, np.zeros(graph.m))
    return TreeCount(log_count=log_count)


def _check_guard(graph: Graph, limit: int) -> None:
    count = count_spanning_trees(graph)
    if count.log_count > math.log(limit) + 1e-9:
        raise GuardExceededError("Spanning tree enumeration", count.value, limit)


def enumerate_spanning_trees(graph: Graph, limit: Optional[int] = None) -> List[SpanningTree]:
    """
    All spanning trees, in lexicographic order of their sorted edge ids.

    Backtracking over edge inclusion: an edge is included only if it joins two
    components, and excluded only if the remaining edges can still connect the
    graph.

    Raises:
        GuardExceededError: |T(G)| exceeds the guard
    """
    limit = get_guard_config()["enumeration_max_trees"] if limit is None else limit
    _check_guard(graph, limit)

    n, m = graph.n, graph.m
    edges = graph.edges
    out: List[SpanningTree] = []
    chosen: List[int] = []

    def connectable(comp: Tuple[int, ...], start: int) -> bool:
        labels = set(comp)
        if len(labels) == 1:
            return True
        uf = UnionFind(labels)
        for u, v in edges[start:]:
            uf.union(comp[u], comp[v])
        return len({uf[c] for c in labels}) == 1

    def recurse(i: int, comp: Tuple[int, ...]) -> None:
        if len(chosen) == n - 1:
            out.append(SpanningTree(tuple(chosen)))
            return
        if m - i < n - 1 - len(chosen):
            return
        u, v = edges[i]
        cu, cv = comp[u], comp[v]
        if cu != cv:
            chosen.append(i)
            recurse(i + 1, tuple(cu if c == cv else c for c in comp))
            chosen.pop()
        if connectable(comp, i + 1):
            recurse(i + 1, comp)

    recurse(0, tuple(range(n)))
    logger.debug(f"Enumerated {len(out)} spanning trees (n={n}, m={m})")
    return out


def incidence_matrix(trees: Sequence[SpanningTree], m: int) -> np.ndarray:
    """Tree-by-edge 0/1 matrix (float64 so overlaps go through BLAS)."""
    mat = np.zeros((len(trees), m), dtype=np.float64)
    for row, tree in enumerate(trees):
        mat[row, list(tree.edge_ids)] = 1.0
    return mat


def pairwise_overlap_extremes(
    trees: Sequence[SpanningTree],
    m: int,
    exclude_diagonal: bool = True,
) -> Tuple[int, int]:
    """
    (min, max) shared-edge count over tree pairs, scanned in row blocks.

    d_H(T1, T2) = (n - 1) - overlap, so the min overlap gives the max distance.
    """
    if len(trees) < 2 and exclude_diagonal:
        size = len(trees[0]) if trees else 0
        return size, size
    mat = incidence_matrix(trees, m)
    chunk = get_guard_config()["diameter_chunk_rows"]
    lo, hi = math.inf, -math.inf
    for start in range(0, mat.shape[0], chunk):
        block = mat[start:start + chunk] @ mat.T
        if exclude_diagonal:
            rows = np.arange(block.shape[0])
            block[rows, start + rows] = np.nan
        lo = min(lo, np.nanmin(block))
        hi = max(hi, np.nanmax(block))
    return int(round(lo)), int(round(hi))


def diameter_exact(graph: Graph, limit: Optional[int] = None) -> int:
    """
    diam_T(G) = max over tree pairs of d_H, by brute force.

    Raises:
        GuardExceededError: |T(G)| exceeds the guard
    """
    trees = enumerate_spanning_trees(graph, limit=limit)
    if len(trees) == 1:
        return 0
    min_overlap, _ = pairwise_overlap_extremes(trees, graph.m)
    return (graph.n - 1) - min_overlap


def reference_diameter(graph: Graph) -> Tuple[int, bool]:
    """
    D when |T(G)| fits the exact-diameter budget, else R0 from the zero-weight MST.

    Returns:
        (value, is_exact)
    """
    budget = get_guard_config()["exact_diameter_max_trees"]
    if count_spanning_trees(graph).log_count <= math.log(budget) + 1e-9:
        return diameter_exact(graph, limit=budget), True
    r0 = diameter_2approx(graph, zero_weight_tree(graph))
    logger.warning(f"|T(G)| above {budget}; using R0={r0} in place of the exact diameter")
    return r0, False


def tree_count_log_bounds(graph: Graph, diameter: int) -> Tuple[float, float]:
    """Natural-log sandwich D ln 2 <= ln |T(G)| <= 3 D ln n."""
    return diameter * math.log(2.0), 3.0 * diameter * math.log(graph.n)
