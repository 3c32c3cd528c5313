"""
Data model for the private MST toolkit.

Defines the value types that flow between graph_core, tree_space, mechanisms,
lower_bounds and the experiment runner. All types are immutable after
construction; validation lives in the builder functions (core.graph.build_graph,
core.graph.make_tree, core.graph.as_weights).
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - typing (TypedDict, 类型别名), dataclasses (数据类), enum,
#                   numpy (权重向量), networkx (图视图)
# OUTPUT: 对外提供 - Graph, WeightVector, SpanningTree, NeighborRelation,
#                   MechanismConfig, MultiEdge, MultiGraph, CodeBook, DissimilarSet,
#                   PackingInstance, TreeCount, ExperimentRow, StressReport,
#                   AuditReport, LowerBoundReport, RadiusCertificate,
#                   DisjointnessWitness
# POSITION: 系统地位 - Core/State (核心层-数据定义)
#                     所有模块共享的数据契约
# ============================================================================

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, FrozenSet, Iterator, List, NamedTuple, Optional, Tuple, TypedDict

import networkx as nx
import numpy as np
import numpy.typing as npt

from core.errors import InputValidationError


# Real weight per edge index (private input w in R^E)
WeightVector = npt.NDArray[np.float64]


@dataclass(frozen=True)
class Graph:
    """
    Public, simple, connected, non-tree graph with an indexed edge list.

    Edge order is the canonical edge indexing for every other operation.
    Build instances with core.graph.build_graph, which enforces the invariants.
    """
    n: int
    edges: Tuple[Tuple[int, int], ...]
    _index: Dict[FrozenSet[int], int] = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(
            self, "_index", {frozenset(pair): i for i, pair in enumerate(self.edges)}
        )

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int:
        """Index of the edge {u, v}; KeyError if absent."""
        return self._index[frozenset((u, v))]

    def has_edge(self, u: int, v: int) -> bool:
        return frozenset((u, v)) in self._index

    def is_clique(self) -> bool:
        return self.m == self.n * (self.n - 1) // 2

    def to_networkx(self, edge_ids: Optional[Tuple[int, ...]] = None) -> nx.Graph:
        """Simple networkx view; each edge carries its index as attribute ``eid``."""
        g = nx.Graph()
        g.add_nodes_from(range(self.n))
        ids = range(self.m) if edge_ids is None else edge_ids
        for i in ids:
            u, v = self.edges[i]
            g.add_edge(u, v, eid=i)
        return g


@dataclass(frozen=True, order=True)
class SpanningTree:
    """Sorted set of exactly n-1 edge indices forming a spanning tree."""
    edge_ids: Tuple[int, ...]
    edge_set: FrozenSet[int] = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self):
        ids = tuple(sorted(self.edge_ids))
        object.__setattr__(self, "edge_ids", ids)
        object.__setattr__(self, "edge_set", frozenset(ids))

    def __len__(self) -> int:
        return len(self.edge_ids)

    def __iter__(self) -> Iterator[int]:
        return iter(self.edge_ids)

    def __contains__(self, eid: object) -> bool:
        return eid in self.edge_set

    def format(self) -> str:
        return " ".join(str(e) for e in self.edge_ids)


class NeighborRelation(str, Enum):
    """Neighbour relation on weight vectors: l1 (||w - w'||_1 <= 1) or linf."""
    L1 = "l1"
    LINF = "linf"

    @classmethod
    def parse(cls, value: "str | NeighborRelation") -> "NeighborRelation":
        if isinstance(value, NeighborRelation):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise InputValidationError(f"Unknown neighbor relation {value!r} (expected l1 or linf)")


@dataclass(frozen=True)
class MechanismConfig:
    """Privacy budget, neighbour relation and randomness root of one release."""
    epsilon: float
    relation: NeighborRelation = NeighborRelation.L1
    seed: int = 0

    def __post_init__(self):
        if not math.isfinite(self.epsilon) or self.epsilon <= 0:
            raise InputValidationError(f"epsilon must be finite and positive, got {self.epsilon}")
        object.__setattr__(self, "relation", NeighborRelation.parse(self.relation))
        if not 0 <= int(self.seed) < 2 ** 64:
            raise InputValidationError(f"seed must be a 64-bit unsigned integer, got {self.seed}")


class MultiEdge(NamedTuple):
    """Parallel-edge record of a MultiGraph; the factor is kept in log-domain."""
    u: int
    v: int
    log_factor: float
    eid: int

    @property
    def factor(self) -> float:
        return math.exp(self.log_factor)


@dataclass(frozen=True)
class MultiGraph:
    """
    Intermediate state of contraction/deletion sampling.

    Vertices are 0..vertex_count-1; self-loops are never stored.
    """
    vertex_count: int
    records: Tuple[MultiEdge, ...]


@dataclass(frozen=True)
class CodeBook:
    """(length, |words|, min_distance)_2 binary code; words are '0'/'1' strings."""
    length: int
    words: Tuple[str, ...]
    min_distance: int

    def __post_init__(self):
        if not self.words:
            raise InputValidationError("A code book needs at least one word")
        for word in self.words:
            if len(word) != self.length or set(word) - {"0", "1"}:
                raise InputValidationError(f"Code word {word!r} is not a binary word of length {self.length}")

    @property
    def size(self) -> int:
        return len(self.words)


@dataclass(frozen=True)
class DissimilarSet:
    """Spanning trees whose pairwise Hamming distance strictly exceeds ``separation``."""
    trees: Tuple[SpanningTree, ...]
    separation: float
    method: str = "given"

    @property
    def size(self) -> int:
        return len(self.trees)


@dataclass(frozen=True)
class PackingInstance:
    """Weight family {alpha * 1_T : T in S} of the packing lower bound."""
    trees: Tuple[SpanningTree, ...]
    weights: Tuple[WeightVector, ...]
    alpha: float
    x: float
    relation: NeighborRelation
    r: int
    epsilon: float
    separation: float
    diameter: int
    diameter_is_exact: bool


@dataclass(frozen=True)
class TreeCount:
    """Number of spanning trees: natural log always, exact integer when feasible."""
    log_count: float
    exact: Optional[int] = None

    @property
    def value(self) -> float:
        return float(self.exact) if self.exact is not None else math.exp(self.log_count)


class ExperimentRow(TypedDict):
    """One CSV row of run_experiment."""
    graph_id: str
    n: int
    m: int
    D_or_R0: int
    relation: str
    mechanism: str
    epsilon: float
    trial: int
    seed: int
    error: float
    runtime_ns: int


class StressReport(TypedDict):
    """Outcome of stress_mechanism."""
    mechanism: str
    trials: int
    fractions: List[float]
    min_fraction: Optional[float]
    cap: float
    packing_cap: float
    standard_error: float
    within_cap: bool


class AuditReport(TypedDict):
    """Outcome of an exact privacy audit."""
    mechanism: str
    relation: str
    epsilon: float
    directions: int
    max_ratio: float
    bound: float
    passed: bool


class LowerBoundReport(TypedDict):
    """Concrete lower-bound level for a graph."""
    value: float
    set_size: int
    separation: float
    diameter: int
    diameter_is_exact: bool
    vacuous: bool
    expected_error_floor: float


class RadiusCertificate(TypedDict):
    """Largest pairwise neighbour distance inside a packing instance vs. its certified bound."""
    norm: str
    max_distance: float
    bound: float
    holds: bool


class DisjointnessWitness(NamedTuple):
    """A tree that is light under two different instance weights."""
    tree: SpanningTree
    first: int
    second: int
