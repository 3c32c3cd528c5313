"""
Graph families for experiments.

Cycles (D = 1), cliques, grids, trees with k extra edges (D <= k) and
connected G(n, p) samples. Every generator returns a validated Graph whose
edge list is canonical: pairs (u, v) with u < v, sorted.
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - networkx (图族生成器, Prüfer 序列), config (重试上限),
#                   tools.mechanisms.make_rng (可复现随机数), core.graph.build_graph
# OUTPUT: 对外提供 - generate_graph, graph_id, parse_params, GENERATORS
# POSITION: 系统地位 - Tool/Generators (工具层-图生成)
#                     CLI gen 子命令与实验运行器的图来源
# ============================================================================

import logging
from typing import Any, Callable, Dict, Iterable

import networkx as nx

from config import get_experiment_config
from core.errors import InputValidationError
from core.graph import build_graph
from core.state import Graph
from tools.mechanisms import make_rng

logger = logging.getLogger("tools.graph_generators")


def _from_networkx(g: nx.Graph) -> Graph:
    g = nx.convert_node_labels_to_integers(g, ordering="sorted")
    edges = sorted((min(u, v), max(u, v)) for u, v in g.edges())
    return build_graph(g.number_of_nodes(), edges)


def cycle(n: int) -> Graph:
    if n < 3:
        raise InputValidationError(f"cycle needs n >= 3, got {n}")
    return _from_networkx(nx.cycle_graph(n))


def clique(n: int) -> Graph:
    if n < 3:
        raise InputValidationError(f"clique needs n >= 3, got {n}")
    return _from_networkx(nx.complete_graph(n))


def grid(rows: int, cols: int) -> Graph:
    if rows < 2 or cols < 2:
        raise InputValidationError(f"grid needs rows, cols >= 2, got {rows}x{cols}")
    return _from_networkx(nx.grid_2d_graph(rows, cols))


def tree_plus_k(n: int, k: int, seed: int = 0) -> Graph:
    """Uniform random labelled tree (Prüfer code) plus k distinct extra edges."""
    if n < 3:
        raise InputValidationError(f"tree_plus_k needs n >= 3, got {n}")
    if not 1 <= k <= n * (n - 1) // 2 - (n - 1):
        raise InputValidationError(f"tree_plus_k on n={n} admits 1..{n * (n - 1) // 2 - (n - 1)} extra edges, got {k}")

    rng = make_rng(seed)
    g = nx.from_prufer_sequence([int(x) for x in rng.integers(n, size=n - 2)])
    missing = [(u, v) for u in range(n) for v in range(u + 1, n) if not g.has_edge(u, v)]
    for i in sorted(rng.choice(len(missing), size=k, replace=False).tolist()):
        g.add_edge(*missing[i])
    return _from_networkx(g)


def gnp_connected(n: int, p: float, seed: int = 0) -> Graph:
    """G(n, p) resampled with seeds seed, seed+1, ... until connected and not a tree."""
    if n < 3 or not 0.0 < p <= 1.0:
        raise InputValidationError(f"gnp_connected needs n >= 3 and 0 < p <= 1, got n={n}, p={p}")
    retries = get_experiment_config()["gnp_max_retries"]
    for attempt in range(retries):
        g = nx.gnp_random_graph(n, p, seed=int(seed) + attempt)
        if nx.is_connected(g) and g.number_of_edges() >= n:
            if attempt:
                logger.debug(f"gnp_connected(n={n}, p={p}) connected after {attempt + 1} draws")
            return _from_networkx(g)
    raise InputValidationError(f"gnp_connected(n={n}, p={p}) stayed disconnected or acyclic after {retries} draws")


GENERATORS: Dict[str, Callable[..., Graph]] = {
    "cycle": cycle,
    "clique": clique,
    "grid": grid,
    "tree_plus_k": tree_plus_k,
    "gnp_connected": gnp_connected,
}


def generate_graph(family: str, params: Dict[str, Any]) -> Graph:
    """
    Build a graph from a named family.

    Args:
        family: One of GENERATORS
        params: Keyword parameters of the family (n, rows/cols, k, p, seed)

    Raises:
        InputValidationError: unknown family, bad parameters, or retry budget exhausted
    """
    try:
        fn = GENERATORS[family]
    except KeyError:
        raise InputValidationError(f"Unknown graph family {family!r} (expected one of {sorted(GENERATORS)})")
    try:
        graph = fn(**params)
    except TypeError as e:
        raise InputValidationError(f"Bad parameters for {family}: {e}")
    logger.info(f"Generated {graph_id(family, params)}: n={graph.n}, m={graph.m}")
    return graph


def graph_id(family: str, params: Dict[str, Any]) -> str:
    """Stable label such as ``tree_plus_k(n=20,k=4,seed=1)``."""
    inner = ",".join(f"{k}={params[k]}" for k in sorted(params))
    return f"{family}({inner})"


def _coerce(raw: str) -> Any:
    for cast in (int, float):
        try:
            return cast(raw)
        except ValueError:
            continue
    return raw


def parse_params(items: Iterable[str]) -> Dict[str, Any]:
    """Turn ``["n=8", "p=0.3"]`` into ``{"n": 8, "p": 0.3}``."""
    out: Dict[str, Any] = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise InputValidationError(f"Expected key=value, got {item!r}")
        out[key.strip()] = _coerce(value.strip())
    return out
