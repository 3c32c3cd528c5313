"""
Combinatorics of the spanning-tree metric space.

Exchange surgery between trees, greedy Gilbert-Varshamov codes and their
embedding into tree space, greedy packing, ball-volume bounds, and the
dissimilar-tree-set builder used by the lower bounds.
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - numpy (bitwise_count 码距扫描), networkx (基本圈路径),
#                   config (枚举上限/码长上限), core.graph, core.counting, core.state
# OUTPUT: 对外提供 - exchange_step, iterated_exchange, gv_code, codebook_min_distance,
#                   embed_code, greedy_packing, ball_volume_bound, exact_ball_size,
#                   pairwise_min_distance, is_dissimilar, dissimilar_set
# POSITION: 系统地位 - Tool/TreeSpace (工具层-树空间组合学)
#                     下界构造 (lower_bounds) 的输入来源
# ============================================================================

import logging
import math
from typing import Iterable, List, Sequence, Tuple

import networkx as nx
import numpy as np

from config import get_sampler_config
from core.counting import enumerate_spanning_trees, pairwise_overlap_extremes
from core.errors import GuardExceededError, InputValidationError
from core.graph import farthest_tree, hamming_distance, zero_weight_tree
from core.state import CodeBook, DissimilarSet, Graph, SpanningTree

logger = logging.getLogger("tools.tree_space")


# ----------------------------------------------------------------------------
# Exchange surgery
# ----------------------------------------------------------------------------

def exchange_step(graph: Graph, tx: SpanningTree, ty: SpanningTree, e: int) -> Tuple[int, SpanningTree]:
    """
    Swap e in Ty \\ Tx into Tx, dropping f in Tx \\ Ty from the fundamental cycle.

    Among valid f the smallest edge index is chosen.

    Returns:
        (f, T') with T' = Tx + e - f a spanning tree and |Ty \\ T'| = |Ty \\ Tx| - 1

    Raises:
        InputValidationError: e is not in Ty \\ Tx
    """
    if e not in ty.edge_set or e in tx.edge_set:
        raise InputValidationError(f"Edge {e} is not in Ty \\ Tx")

    u, v = graph.edges[e]
    path = nx.shortest_path(graph.to_networkx(tx.edge_ids), u, v)
    cycle = [graph.edge_id(a, b) for a, b in zip(path, path[1:])]
    candidates = [f for f in cycle if f not in ty.edge_set]
    # acyclicity of Ty guarantees a candidate
    f = min(candidates)
    return f, SpanningTree(tuple((tx.edge_set - {f}) | {e}))


def iterated_exchange(graph: Graph, ta: SpanningTree, tb: SpanningTree, q: Iterable[int]) -> SpanningTree:
    """
    T_Q with T_Q \\ Ta = Q and |Tb \\ T_Q| = |Tb \\ Ta| - |Q|.

    Q is processed in ascending edge index.

    Raises:
        InputValidationError: Q is not a subset of Tb \\ Ta
    """
    q_set = set(int(e) for e in q)
    allowed = tb.edge_set - ta.edge_set
    if not q_set <= allowed:
        raise InputValidationError(f"Edges {sorted(q_set - allowed)} are not in Tb \\ Ta")
    tree = ta
    for e in sorted(q_set):
        _, tree = exchange_step(graph, tree, tb, e)
    return tree


# ----------------------------------------------------------------------------
# Binary codes
# ----------------------------------------------------------------------------

def _greedy_lexicode(length: int, min_distance: int, target: int) -> List[int]:
    """
    Greedy GV scan over {0,1}^length in lexicographic order, truncated at ``target``.

    Candidates are filtered block-wise against the kept words with numpy
    popcounts; survivors of a block are then checked against each other in order.
    """
    if length == 0:
        return [0]
    block = get_sampler_config()["gv_block_size"]
    kept: List[int] = []
    kept_arr = np.zeros(0, dtype=np.uint64)
    total = 1 << length
    for start in range(0, total, block):
        cand = np.arange(start, min(start + block, total), dtype=np.uint64)
        if kept_arr.size:
            dist = np.bitwise_count(cand[:, None] ^ kept_arr[None, :])
            cand = cand[(dist >= min_distance).all(axis=1)]
        fresh: List[int] = []
        for word in cand.tolist():
            if all((word ^ other).bit_count() >= min_distance for other in fresh):
                fresh.append(word)
                if len(kept) + len(fresh) >= target:
                    break
        kept.extend(fresh)
        kept_arr = np.asarray(kept, dtype=np.uint64)
        if len(kept) >= target:
            break
    return kept


def gv_code(n: int) -> CodeBook:
    """
    (n, 2^floor(n/3), floor(n/6) + 1)_2 code by greedy Gilbert-Varshamov.

    The scan runs at length n' = 6 floor(n/6) and pads every word with n - n'
    zeros. For n < 6 (n' = 0) the single empty word cannot reach the size
    target, so the scan is repeated at length n with the same distance.
    """
    if int(n) != n or n < 1:
        raise InputValidationError(f"Code length must be a positive integer, got {n}")
    n = int(n)
    limit = get_sampler_config()["gv_max_length"]
    if n > limit:
        raise GuardExceededError("Greedy GV code length", n, limit)

    target = 1 << (n // 3)
    distance = n // 6 + 1
    base = 6 * (n // 6)

    words = _greedy_lexicode(base, distance, target)
    if len(words) >= target:
        strings = tuple(format(x, f"0{base}b") + "0" * (n - base) if base else "0" * n for x in words)
    else:
        words = _greedy_lexicode(n, distance, target)
        strings = tuple(format(x, f"0{n}b") for x in words)

    logger.debug(f"gv_code(n={n}): {len(strings)} words, min distance {distance}")
    return CodeBook(length=n, words=strings, min_distance=distance)


def codebook_min_distance(code: CodeBook) -> int:
    """Minimum pairwise Hamming distance by full scan (length when only one word)."""
    if code.size < 2:
        return code.length
    bits = np.array([[c == "1" for c in word] for word in code.words], dtype=np.int64)
    diff = bits @ (1 - bits).T
    dist = diff + diff.T
    np.fill_diagonal(dist, code.length + 1)
    return int(dist.min())


def embed_code(graph: Graph, ta: SpanningTree, tb: SpanningTree, code: CodeBook) -> DissimilarSet:
    """
    Map each code word x to T_{Q_x}, Q_x = {e_i : x_i = 1}.

    e_1..e_D are the edges of Tb \\ Ta in ascending index. With code distance
    d + 1 the trees are pairwise more than d/2 apart.

    Raises:
        InputValidationError: d_H(Ta, Tb) differs from the code length
    """
    diff = sorted(tb.edge_set - ta.edge_set)
    if len(diff) != code.length:
        raise InputValidationError(f"d_H(Ta, Tb) = {len(diff)} but the code has length {code.length}")
    trees = tuple(
        iterated_exchange(graph, ta, tb, [e for e, bit in zip(diff, word) if bit == "1"])
        for word in code.words
    )
    return DissimilarSet(trees=trees, separation=(code.min_distance - 1) / 2, method="code")


# ----------------------------------------------------------------------------
# Greedy packing
# ----------------------------------------------------------------------------

def greedy_packing(trees: Sequence[SpanningTree], d: float) -> DissimilarSet:
    """
    Pick trees in lexicographic order, removing the closed d-ball around each pick.

    Removing d_H <= d keeps every pairwise distance strictly above d.
    """
    if not d > 0:
        raise InputValidationError(f"Packing radius must be positive, got {d}")
    remaining = sorted(set(trees))
    picked: List[SpanningTree] = []
    while remaining:
        center = remaining[0]
        picked.append(center)
        remaining = [t for t in remaining[1:] if hamming_distance(center, t) > d]
    return DissimilarSet(trees=tuple(picked), separation=float(d), method="packing")


def ball_volume_bound(graph: Graph, d: float) -> float:
    """
    log(m^floor(d) * n^floor(d)), the certified size bound of a closed d-ball.

    Returned in natural-log domain.
    """
    if not d > 0:
        raise InputValidationError(f"Ball radius must be positive, got {d}")
    k = math.floor(d)
    return k * (math.log(graph.m) + math.log(graph.n))


def exact_ball_size(trees: Sequence[SpanningTree], center: SpanningTree, d: float) -> int:
    """|{T' : d_H(center, T') <= d}| over the given trees."""
    return sum(1 for t in trees if hamming_distance(center, t) <= d)


def pairwise_min_distance(trees: Sequence[SpanningTree], m: int) -> int:
    """Minimum d_H over distinct pairs (vectorised overlap scan)."""
    if len(trees) < 2:
        raise InputValidationError("Need at least two trees for a pairwise distance")
    _, max_overlap = pairwise_overlap_extremes(trees, m)
    return len(trees[0]) - max_overlap


def is_dissimilar(dset: DissimilarSet, m: int) -> bool:
    """Check the DissimilarSet invariant: every pairwise d_H exceeds the separation."""
    if dset.size < 2:
        return True
    return pairwise_min_distance(dset.trees, m) > dset.separation


# ----------------------------------------------------------------------------
# Dissimilar sets
# ----------------------------------------------------------------------------

def dissimilar_set(graph: Graph) -> DissimilarSet:
    """
    Large set of pairwise-far spanning trees.

    Cliques whose trees can be enumerated use greedy packing with
    d = (n - 2)/6. Every other graph (and cliques past the enumeration guard)
    takes T0 = zero-weight MST, Tb = the tree farthest from T0 (R0 = d_H(T0, Tb)),
    and embeds gv_code(R0). When R0 exceeds the code-length limit L the code
    is embedded between T0 and T_Q = iterated_exchange(T0, Tb, Q), Q the L
    smallest edges of Tb \\ T0, so d_H(T0, T_Q) = L.
    """
    if graph.is_clique():
        try:
            trees = enumerate_spanning_trees(graph)
            dset = greedy_packing(trees, (graph.n - 2) / 6)
            logger.info(f"Clique packing: {dset.size} trees from {len(trees)}")
            return dset
        except GuardExceededError as e:
            logger.warning(f"Clique packing unavailable ({e}); falling back to the code embedding")

    t0 = zero_weight_tree(graph)
    tb = farthest_tree(graph, t0)
    r0 = hamming_distance(t0, tb)
    limit = get_sampler_config()["gv_max_length"]
    if r0 > limit:
        logger.warning(f"R0={r0} exceeds the code-length limit {limit}; embedding at distance {limit} only")
        tb = iterated_exchange(graph, t0, tb, sorted(tb.edge_set - t0.edge_set)[:limit])
    dset = embed_code(graph, t0, tb, gv_code(hamming_distance(t0, tb)))
    logger.info(f"Code embedding: R0={r0}, {dset.size} trees, separation {dset.separation}")
    return dset
