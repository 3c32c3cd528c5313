"""
Configuration module for the private MST toolkit.
"""

# ============================================================================
# 文件头注释 (File Header)
# POSITION: 模块初始化文件 - 导出config模块的配置字典和getter函数
# ============================================================================

from .mechanism_config import (
    GUARD_CONFIG,
    NUMERICS_CONFIG,
    SAMPLER_CONFIG,
    EXPERIMENT_CONFIG,
    get_guard_config,
    get_numerics_config,
    get_sampler_config,
    get_experiment_config,
)

__all__ = [
    'GUARD_CONFIG',
    'NUMERICS_CONFIG',
    'SAMPLER_CONFIG',
    'EXPERIMENT_CONFIG',
    'get_guard_config',
    'get_numerics_config',
    'get_sampler_config',
    'get_experiment_config',
]
