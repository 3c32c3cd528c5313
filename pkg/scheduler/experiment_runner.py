"""
Seeded experiment runner for mechanism error measurements.
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - pydantic (实验规格校验), tomllib (spec.toml), concurrent.futures,
#                   numpy, pandas, config.get_experiment_config, core.*, tools.mechanisms,
#                   tools.graph_generators, tools.file_manager, tools.metrics
# OUTPUT: 对外提供 - ExperimentSpec, ExperimentRunner类, load_spec, run_experiment,
#                   separation_experiment, separation_ratios, laplace_tail_experiment,
#                   summarize, ExperimentRunner.summarize_with_bounds
# POSITION: 系统地位 - [Scheduler/Execution Layer] - 实验执行器,按 (epsilon, trial)
#                     并发执行机制发布并生成 CSV 行
# ============================================================================

import logging
import math
import time
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from config import get_experiment_config
from core.counting import count_spanning_trees, reference_diameter
from core.errors import InputValidationError
from core.graph import as_weights, indicator_weights, mst, tree_weight, zero_weight_tree
from core.state import ExperimentRow, Graph, MechanismConfig, NeighborRelation, WeightVector
from tools.file_manager import FileManager
from tools.graph_generators import cycle, generate_graph, graph_id
from tools.mechanisms import make_rng, release, trial_seed
from tools.metrics import (
    binomial_standard_error,
    laplace_tail_threshold,
    summarize_rows,
    tail_fraction,
    utility_bound,
)

logger = logging.getLogger("scheduler.experiment_runner")


class ExperimentSpec(BaseModel):
    """
    One bench run: graph source, weight source, mechanism, epsilons and trials.

    kind = "separation" runs the cycle separation study over ``n_list`` instead.
    """
    kind: Literal["error", "separation"] = "error"

    graph_file: Optional[str] = None
    family: Optional[str] = None
    params: Dict[str, Any] = Field(default_factory=dict)
    n_list: List[int] = Field(default_factory=list)

    weights: Literal["zeros", "uniform", "adversarial", "file"] = "uniform"
    weights_file: Optional[str] = None
    low: float = 0.0
    high: float = 1.0
    weight_scale: float = 1.0
    weights_seed: int = 0

    mechanism: Literal["laplace", "expmech"] = "laplace"
    relation: NeighborRelation = NeighborRelation.L1
    epsilons: List[float] = Field(default_factory=lambda: [1.0])
    trials: int = Field(default_factory=lambda: get_experiment_config()["default_trials"], ge=1)
    seed: int = Field(default_factory=lambda: get_experiment_config()["default_seed"], ge=0, lt=2 ** 64)
    tail_gamma: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    output: Optional[str] = None

    @field_validator("relation", mode="before")
    @classmethod
    def _parse_relation(cls, value: Any) -> NeighborRelation:
        return NeighborRelation.parse(value)

    @field_validator("epsilons")
    @classmethod
    def _positive_epsilons(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("epsilons must not be empty")
        if any(not math.isfinite(e) or e <= 0 for e in value):
            raise ValueError(f"epsilons must be finite and positive, got {value}")
        return value

    @model_validator(mode="after")
    def _check_sources(self) -> "ExperimentSpec":
        if self.kind == "separation":
            if not self.n_list or any(n < 3 for n in self.n_list):
                raise ValueError("separation specs need n_list with every n >= 3")
            if self.weights == "file":
                raise ValueError("separation specs build their own cycles and cannot read weights_file")
            if "weights" not in self.model_fields_set:
                self.weights = "adversarial"
        elif (self.graph_file is None) == (self.family is None):
            raise ValueError("exactly one of graph_file and family is required")
        if self.weights == "file" and self.weights_file is None:
            raise ValueError("weights = 'file' requires weights_file")
        if self.weights == "uniform" and not self.low <= self.high:
            raise ValueError(f"uniform weights need low <= high, got [{self.low}, {self.high}]")
        return self


def load_spec(path: Path, overrides: Optional[Dict[str, Any]] = None) -> ExperimentSpec:
    """
    Parse and validate a TOML experiment spec.

    Raises:
        InputValidationError: unreadable TOML or a spec that fails validation
    """
    path = Path(path)
    try:
        with open(path, "rb") as f:
            raw = tomllib.load(f)
    except FileNotFoundError:
        raise InputValidationError(f"Spec file not found: {path}")
    except tomllib.TOMLDecodeError as e:
        raise InputValidationError(f"Spec file {path} is not valid TOML: {e}")
    raw.update(overrides or {})
    try:
        return ExperimentSpec(**raw)
    except ValidationError as e:
        raise InputValidationError(f"Invalid experiment spec {path}: {e}")


class ExperimentRunner:
    """
    Runs (epsilon, trial) releases concurrently and collects CSV rows.

    Every trial draws from its own stream trial_seed(root, trial), so rows do
    not depend on scheduling or the worker count.
    """

    def __init__(self, max_workers: Optional[int] = None, file_manager: Optional[FileManager] = None):
        """
        Initialize experiment runner.

        Args:
            max_workers: Thread pool size (default from EXPERIMENT_CONFIG)
            file_manager: Resolves graph / weight files in specs
        """
        self.max_workers = max_workers or get_experiment_config()["max_workers"]
        self.file_manager = file_manager or FileManager()

    def resolve_graph(self, spec: ExperimentSpec) -> Tuple[str, Graph]:
        if spec.graph_file is not None:
            return Path(spec.graph_file).stem, self.file_manager.read_graph(spec.graph_file)
        return graph_id(spec.family, spec.params), generate_graph(spec.family, spec.params)

    def resolve_weights(self, spec: ExperimentSpec, graph: Graph) -> WeightVector:
        if spec.weights == "zeros":
            return np.zeros(graph.m)
        if spec.weights == "uniform":
            return make_rng(spec.weights_seed).uniform(spec.low, spec.high, size=graph.m)
        if spec.weights == "adversarial":
            return spec.weight_scale * indicator_weights(graph, zero_weight_tree(graph))
        return self.file_manager.read_weights(spec.weights_file, graph)

    def run_trials(
        self,
        label: str,
        graph: Graph,
        w: WeightVector,
        mechanism: str,
        relation: NeighborRelation,
        epsilons: Sequence[float],
        trials: int,
        seed: int,
        d_or_r0: Optional[int] = None,
    ) -> List[ExperimentRow]:
        """
        One row per (epsilon, trial), sorted by epsilon then trial.

        Args:
            label: graph_id column value
            d_or_r0: Diameter column; computed with reference_diameter when omitted
        """
        w = as_weights(graph, w)
        if d_or_r0 is None:
            d_or_r0, _ = reference_diameter(graph)
        optimum = tree_weight(w, mst(graph, w))

        def one(task: Tuple[float, int]) -> ExperimentRow:
            epsilon, trial = task
            cfg = MechanismConfig(epsilon=epsilon, relation=relation, seed=trial_seed(seed, trial))
            start = time.perf_counter_ns()
            tree = release(graph, w, mechanism, cfg)
            elapsed = time.perf_counter_ns() - start
            return ExperimentRow(
                graph_id=label,
                n=graph.n,
                m=graph.m,
                D_or_R0=int(d_or_r0),
                relation=relation.value,
                mechanism=mechanism,
                epsilon=float(epsilon),
                trial=trial,
                seed=cfg.seed,
                error=tree_weight(w, tree) - optimum,
                runtime_ns=elapsed,
            )

        tasks = [(float(e), t) for e in sorted(set(epsilons)) for t in range(trials)]
        logger.info(f"{label}: {mechanism}/{relation.value}, {len(tasks)} releases on {self.max_workers} workers")
        with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
            rows = list(pool.map(one, tasks))
        rows.sort(key=lambda r: (r["epsilon"], r["trial"]))
        return rows

    def run(self, spec: ExperimentSpec) -> List[ExperimentRow]:
        """Execute a spec of either kind."""
        if spec.kind == "separation":
            rows: List[ExperimentRow] = []
            for epsilon in spec.epsilons:
                rows.extend(
                    separation_experiment(spec.n_list, epsilon, spec.trials, spec.seed, weights=spec.weights,
                                          low=spec.low, high=spec.high, weights_seed=spec.weights_seed, runner=self)
                )
            return rows

        label, graph = self.resolve_graph(spec)
        w = self.resolve_weights(spec, graph)
        return self.run_trials(label, graph, w, spec.mechanism, spec.relation, spec.epsilons, spec.trials, spec.seed)

    def summarize_with_bounds(self, spec: ExperimentSpec, rows: Sequence[ExperimentRow]) -> pd.DataFrame:
        """
        summarize() plus the mechanism's closed-form expected-error bound per epsilon.

        The bound is evaluated at the D_or_R0 column, so graphs past the
        exact-diameter budget get the R0 version.
        """
        table = summarize(rows)
        if table.empty:
            return table
        _, graph = self.resolve_graph(spec)
        log_count = count_spanning_trees(graph).log_count
        d_or_r0 = int(rows[0]["D_or_R0"])
        table["bound"] = [
            utility_bound(spec.mechanism, spec.relation, float(eps), graph.n, d_or_r0, log_count, m=graph.m)
            for eps in table["epsilon"]
        ]
        return table


def run_experiment(spec: ExperimentSpec, max_workers: Optional[int] = None) -> List[ExperimentRow]:
    """Rows for ``spec``; identical for identical specs apart from runtime_ns."""
    return ExperimentRunner(max_workers=max_workers).run(spec)


def separation_experiment(
    n_list: Sequence[int],
    epsilon: float,
    trials: int,
    seed: int = 0,
    weights: str = "adversarial",
    low: float = 0.0,
    high: float = 1.0,
    weights_seed: int = 0,
    runner: Optional[ExperimentRunner] = None,
) -> List[ExperimentRow]:
    """
    Laplace vs exponential mechanism under linf on cycles.

    Weights default to (m / eps) * 1_{T0}; ``"zeros"`` gives the all-zero
    variant (every release then has error 0) and ``"uniform"`` draws
    U[low, high] per edge from ``weights_seed``.

    Raises:
        InputValidationError: any other weight kind
    """
    if weights not in ("adversarial", "zeros", "uniform"):
        raise InputValidationError(f"Separation weights must be adversarial, zeros or uniform, got {weights!r}")
    runner = runner or ExperimentRunner()
    rows: List[ExperimentRow] = []
    for n in n_list:
        graph = cycle(n)
        if weights == "zeros":
            w = np.zeros(graph.m)
        elif weights == "uniform":
            w = make_rng(weights_seed).uniform(low, high, size=graph.m)
        else:
            w = (graph.m / epsilon) * indicator_weights(graph, zero_weight_tree(graph))
        label = graph_id("cycle", {"n": n})
        for mechanism in ("laplace", "expmech"):
            rows.extend(
                runner.run_trials(label, graph, w, mechanism, NeighborRelation.LINF, [epsilon], trials, seed, d_or_r0=1)
            )
    return rows


def separation_ratios(rows: Sequence[ExperimentRow]) -> pd.DataFrame:
    """
    Mean error per mechanism and the laplace / expmech ratio per (n, epsilon).

    laplace_bound is the linf Laplace expected-error bound at that size.
    """
    df = pd.DataFrame(list(rows))
    means = df.groupby(["n", "epsilon", "mechanism"])["error"].mean().unstack("mechanism")
    means["ratio"] = means["laplace"] / means["expmech"].where(means["expmech"] > 0)
    shape = df.groupby(["n", "epsilon"])[["m", "D_or_R0"]].first()
    means["laplace_bound"] = [
        utility_bound("laplace", NeighborRelation.LINF, float(eps), int(n), int(d), 0.0, m=int(m))
        for (n, eps), m, d in zip(shape.index, shape["m"], shape["D_or_R0"])
    ]
    return means.reset_index()


def laplace_tail_experiment(rows: Sequence[ExperimentRow], gamma: float) -> List[Dict[str, Any]]:
    """
    Fraction of Laplace releases whose error exceeds 4 D ln(n / gamma) / eps.

    One entry per epsilon; ``within`` compares the fraction with gamma + 3 SE.
    """
    df = pd.DataFrame(list(rows))
    out: List[Dict[str, Any]] = []
    if df.empty:
        return out
    for epsilon, group in df[df["mechanism"] == "laplace"].groupby("epsilon", sort=True):
        first = group.iloc[0]
        threshold = laplace_tail_threshold(int(first["D_or_R0"]), int(first["n"]), gamma, float(epsilon))
        fraction = tail_fraction(group["error"].to_numpy(), threshold)
        se = binomial_standard_error(gamma, len(group))
        out.append({
            "epsilon": float(epsilon),
            "gamma": gamma,
            "threshold": threshold,
            "fraction": fraction,
            "standard_error": se,
            "within": fraction <= gamma + 3.0 * se,
        })
    return out


def summarize(rows: Sequence[ExperimentRow]) -> pd.DataFrame:
    return summarize_rows(pd.DataFrame(list(rows)))
