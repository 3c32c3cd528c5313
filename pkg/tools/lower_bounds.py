"""
Packing lower bounds for private MST release.

A DissimilarSet S with separation d yields the weight family {alpha * 1_T : T in S}.
Under each weight the trees within additive x = alpha*d/2 of the optimum form a
light set; the light sets are pairwise disjoint, while all weights lie within r
neighbour steps of each other. Any eps-DP mechanism then succeeds (error <= x)
with probability at most |S|^{-1/2} on some member of the family.
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - numpy (权重矩阵, 两两距离), config (容差),
#                   core.counting (枚举 / 直径), tools.tree_space (dissimilar_set),
#                   tools.mechanisms (release / trial_seed)
# OUTPUT: 对外提供 - packing_alpha, packing_radius, lower_bound_level, packing_cap,
#                   expected_error_floor, build_packing_instance, light_set,
#                   verify_disjointness, neighbor_radius_certificate,
#                   lower_bound_value, stress_mechanism
# POSITION: 系统地位 - Tool/LowerBounds (工具层-下界构造)
#                     CLI lowerbound 与下界实验的核心
# ============================================================================

import logging
import math
from typing import FrozenSet, Optional, Sequence, Tuple

import numpy as np

from config import get_numerics_config
from core.counting import enumerate_spanning_trees, incidence_matrix, reference_diameter
from core.errors import InputValidationError
from core.graph import as_weights, indicator_weights, mst, tree_weight
from core.state import (
    DissimilarSet,
    DisjointnessWitness,
    Graph,
    LowerBoundReport,
    MechanismConfig,
    NeighborRelation,
    PackingInstance,
    RadiusCertificate,
    SpanningTree,
    StressReport,
    WeightVector,
)
from tools.mechanisms import release, trial_seed
from tools.tree_space import dissimilar_set

logger = logging.getLogger("tools.lower_bounds")


# ----------------------------------------------------------------------------
# Closed-form quantities (natural log throughout)
# ----------------------------------------------------------------------------

def packing_alpha(set_size: int, epsilon: float, relation: NeighborRelation, diameter: int) -> float:
    """alpha = ln|S|/(4 eps D) - 1/(2D) under l1, ln|S|/(2 eps) - 1 under linf."""
    log_s = math.log(set_size)
    if NeighborRelation.parse(relation) is NeighborRelation.L1:
        return log_s / (4.0 * epsilon * diameter) - 1.0 / (2.0 * diameter)
    return log_s / (2.0 * epsilon) - 1.0


def packing_radius(alpha: float, relation: NeighborRelation, diameter: int) -> int:
    """Neighbour steps r between any two instance weights: ceil(2 alpha D) or ceil(alpha)."""
    if NeighborRelation.parse(relation) is NeighborRelation.L1:
        return math.ceil(2.0 * alpha * diameter)
    return math.ceil(alpha)


def lower_bound_level(
    set_size: int,
    separation: float,
    epsilon: float,
    relation: NeighborRelation,
    diameter: int,
) -> float:
    """
    The error level x = alpha * d / 2.

    l1:   (d/D) * (ln|S|/(8 eps) - 1/4)
    linf: d * (ln|S|/(4 eps) - 1/2)
    """
    log_s = math.log(set_size)
    if NeighborRelation.parse(relation) is NeighborRelation.L1:
        return (separation / diameter) * (log_s / (8.0 * epsilon) - 0.25)
    return separation * (log_s / (4.0 * epsilon) - 0.5)


def packing_cap(r: int, epsilon: float, set_size: int) -> float:
    """General packing cap e^{r eps}/|S| on the smallest success probability."""
    return math.exp(r * epsilon) / set_size


def expected_error_floor(x: float, set_size: int) -> float:
    """x * (1 - |S|^{-1/2}): expected error forced on the worst member of the family."""
    return x * (1.0 - set_size ** -0.5)


# ----------------------------------------------------------------------------
# Instances
# ----------------------------------------------------------------------------

def build_packing_instance(
    graph: Graph,
    dset: DissimilarSet,
    epsilon: float,
    relation: NeighborRelation,
    diameter: Optional[Tuple[int, bool]] = None,
) -> PackingInstance:
    """
    Build {alpha * 1_T : T in S} with light-set radius x = alpha * d / 2.

    Args:
        graph: Public graph
        dset: Dissimilar set S (|S| >= 2)
        epsilon: Privacy parameter
        relation: Neighbour relation fixing alpha and r
        diameter: Optional precomputed (D, is_exact); defaults to reference_diameter

    Raises:
        InputValidationError: |S| < 2 or alpha <= 0
    """
    relation = NeighborRelation.parse(relation)
    if not math.isfinite(epsilon) or epsilon <= 0:
        raise InputValidationError(f"epsilon must be finite and positive, got {epsilon}")
    if dset.size < 2:
        raise InputValidationError(f"A packing instance needs |S| >= 2, got {dset.size}")

    d_value, is_exact = reference_diameter(graph) if diameter is None else diameter
    alpha = packing_alpha(dset.size, epsilon, relation, d_value)
    if alpha <= 0:
        raise InputValidationError(
            f"alpha={alpha:.4g} <= 0: |S|={dset.size} is too small for eps={epsilon}, D={d_value} ({relation.value})"
        )

    weights = tuple(alpha * indicator_weights(graph, t) for t in dset.trees)
    inst = PackingInstance(
        trees=tuple(dset.trees),
        weights=weights,
        alpha=alpha,
        x=alpha * dset.separation / 2.0,
        relation=relation,
        r=packing_radius(alpha, relation, d_value),
        epsilon=float(epsilon),
        separation=float(dset.separation),
        diameter=int(d_value),
        diameter_is_exact=is_exact,
    )
    logger.info(
        f"Packing instance: |S|={dset.size}, alpha={alpha:.4g}, x={inst.x:.4g}, r={inst.r}, "
        f"D{'' if is_exact else '~R0'}={d_value}"
    )
    return inst


def _light_mask(trees: Sequence[SpanningTree], m: int, weights: Sequence[WeightVector], x: float) -> np.ndarray:
    """Boolean (trees x weights) matrix: tree is within x of the optimum under each weight."""
    tree_weights = incidence_matrix(trees, m) @ np.column_stack(weights)
    return tree_weights <= tree_weights.min(axis=0, keepdims=True) + x


def light_set(
    graph: Graph,
    w: WeightVector,
    x: float,
    trees: Optional[Sequence[SpanningTree]] = None,
) -> FrozenSet[SpanningTree]:
    """L_w = {T : w(T) <= w(T*_w) + x} over the enumerated trees."""
    w = as_weights(graph, w)
    if x < 0:
        raise InputValidationError(f"Light-set slack must be non-negative, got {x}")
    if trees is None:
        trees = enumerate_spanning_trees(graph)
    mask = _light_mask(trees, graph.m, [w], x)[:, 0]
    return frozenset(t for t, light in zip(trees, mask) if light)


def verify_disjointness(
    graph: Graph,
    inst: PackingInstance,
    trees: Optional[Sequence[SpanningTree]] = None,
) -> Tuple[bool, Optional[DisjointnessWitness]]:
    """
    Check that the light sets of all instance weights are pairwise disjoint.

    Returns:
        (True, None), or (False, witness) naming a tree light under two weights
    """
    if trees is None:
        trees = enumerate_spanning_trees(graph)
    if len(inst.weights) < 2:
        return True, None
    mask = _light_mask(trees, graph.m, inst.weights, inst.x)
    overlaps = np.flatnonzero(mask.sum(axis=1) > 1)
    if overlaps.size == 0:
        return True, None
    row = int(overlaps[0])
    first, second = (int(i) for i in np.flatnonzero(mask[row])[:2])
    logger.warning(f"Light sets {first} and {second} share tree {trees[row].format()}")
    return False, DisjointnessWitness(trees[row], first, second)


def neighbor_radius_certificate(inst: PackingInstance) -> RadiusCertificate:
    """
    Largest pairwise distance between instance weights in the relation's norm.

    Bound is 2 alpha D for l1 and alpha for linf.
    """
    tolerance = get_numerics_config()["certificate_tolerance"]
    mat = np.vstack(inst.weights)
    diffs = np.abs(mat[:, None, :] - mat[None, :, :])
    if inst.relation is NeighborRelation.L1:
        max_distance = float(diffs.sum(axis=2).max())
        bound = 2.0 * inst.alpha * inst.diameter
    else:
        max_distance = float(diffs.max())
        bound = inst.alpha
    return RadiusCertificate(
        norm=inst.relation.value,
        max_distance=max_distance,
        bound=bound,
        holds=max_distance <= bound + tolerance,
    )


def lower_bound_value(graph: Graph, epsilon: float, relation: NeighborRelation) -> LowerBoundReport:
    """
    Concrete lower-bound level for G from the set produced by dissimilar_set.

    Non-positive levels are reported with ``vacuous=True``; the constants only
    bite at larger scale.
    """
    relation = NeighborRelation.parse(relation)
    if not math.isfinite(epsilon) or epsilon <= 0:
        raise InputValidationError(f"epsilon must be finite and positive, got {epsilon}")
    dset = dissimilar_set(graph)
    d_value, is_exact = reference_diameter(graph)
    value = lower_bound_level(dset.size, dset.separation, epsilon, relation, d_value)
    return LowerBoundReport(
        value=value,
        set_size=dset.size,
        separation=dset.separation,
        diameter=d_value,
        diameter_is_exact=is_exact,
        vacuous=value <= 0,
        expected_error_floor=expected_error_floor(value, dset.size),
    )


def stress_mechanism(
    graph: Graph,
    inst: PackingInstance,
    mechanism: str,
    trials: int,
    seed: int = 0,
) -> StressReport:
    """
    Empirical success fraction Pr[error <= x] of a mechanism on every instance weight.

    Weight i, trial t runs under seed trial_seed(seed, i * trials + t). The
    minimum fraction is compared with |S|^{-1/2} plus three binomial
    standard errors.
    """
    if trials < 0:
        raise InputValidationError(f"trials must be non-negative, got {trials}")
    size = len(inst.weights)
    cap = size ** -0.5
    report = StressReport(
        mechanism=mechanism,
        trials=trials,
        fractions=[],
        min_fraction=None,
        cap=cap,
        packing_cap=packing_cap(inst.r, inst.epsilon, size),
        standard_error=0.0,
        within_cap=True,
    )
    if trials == 0:
        return report

    tolerance = get_numerics_config()["certificate_tolerance"]
    for i, w in enumerate(inst.weights):
        optimum = tree_weight(w, mst(graph, w))
        hits = 0
        for t in range(trials):
            cfg = MechanismConfig(inst.epsilon, inst.relation, trial_seed(seed, i * trials + t))
            tree = release(graph, w, mechanism, cfg)
            if tree_weight(w, tree) - optimum <= inst.x + tolerance:
                hits += 1
        report["fractions"].append(hits / trials)

    min_fraction = min(report["fractions"])
    report["min_fraction"] = min_fraction
    report["standard_error"] = math.sqrt(cap * (1.0 - cap) / trials)
    report["within_cap"] = min_fraction <= cap + 3.0 * report["standard_error"]
    logger.info(
        f"stress {mechanism}: min fraction {min_fraction:.4f} vs cap {cap:.4f} "
        f"(+3SE {3.0 * report['standard_error']:.4f})"
    )
    return report
