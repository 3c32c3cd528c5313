"""
Configuration for the private MST toolkit.

Guards for the exhaustive oracles, numeric tolerances of the sampler and the
audits, and defaults for the experiment runner.
"""

# ============================================================================
# 文件头注释 (File Header)
# INPUT:  外部依赖 - os (环境变量), dotenv (环境变量加载), typing
# OUTPUT: 对外提供 - GUARD_CONFIG / NUMERICS_CONFIG / SAMPLER_CONFIG /
#                   EXPERIMENT_CONFIG 字典, get_guard_config / get_numerics_config /
#                   get_sampler_config / get_experiment_config 函数
# POSITION: 系统地位 - Config (配置层) - 枚举上限、数值容差、实验默认参数的唯一来源
# ============================================================================

import os
from typing import Any, Dict

from dotenv import load_dotenv

# Load environment variables
load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"Environment variable {name} must be an integer, got {raw!r}")


# Limits for the exhaustive oracles (enumeration, exact counts, exact diameter)
GUARD_CONFIG: Dict[str, Any] = {
    "enumeration_max_trees": _env_int("MSTDP_ENUMERATION_GUARD", 1_000_000),
    "exact_count_max_vertices": _env_int("MSTDP_EXACT_COUNT_MAX_N", 16),
    "exact_diameter_max_trees": 5_000,  # budget for D_or_R0 in experiment rows
    "diameter_chunk_rows": 512,  # rows per block in the pairwise overlap scan
}


# Numeric tolerances
NUMERICS_CONFIG: Dict[str, Any] = {
    "clamp_tolerance": 1e-6,  # p_e outside [0,1] by more than this aborts
    "dp_ratio_slack": 1e-9,  # audits accept ratios up to e^eps * (1 + slack)
    "certificate_tolerance": 1e-12,  # neighbour-radius certificates
}


# Sampler / code construction
SAMPLER_CONFIG: Dict[str, Any] = {
    "gv_block_size": 4096,  # candidate words filtered per numpy block
    "gv_max_length": 30,  # longer codes are refused; dissimilar_set truncates R0 to this
}


# Experiment runner
EXPERIMENT_CONFIG: Dict[str, Any] = {
    "max_workers": _env_int("MSTDP_MAX_WORKERS", 4),
    "gnp_max_retries": 200,
    "csv_line_terminator": "\r\n",
    "csv_columns": [
        "graph_id", "n", "m", "D_or_R0", "relation", "mechanism",
        "epsilon", "trial", "seed", "error", "runtime_ns",
    ],
    "default_trials": 1000,
    "default_seed": 0,
}


def get_guard_config() -> Dict[str, Any]:
    """
    Get the enumeration / exact-arithmetic guards.

    Returns:
        Copy of GUARD_CONFIG
    """
    return dict(GUARD_CONFIG)


def get_numerics_config() -> Dict[str, Any]:
    """
    Get numeric tolerances.

    Returns:
        Copy of NUMERICS_CONFIG
    """
    return dict(NUMERICS_CONFIG)


def get_sampler_config() -> Dict[str, Any]:
    """Get sampler / code-construction parameters."""
    return dict(SAMPLER_CONFIG)


def get_experiment_config(overrides: Dict[str, Any] | None = None) -> Dict[str, Any]:
    """获取实验配置，合并覆盖项。"""
    return {**EXPERIMENT_CONFIG, **(overrides or {})}
