"""
Scheduler module: experiment runner and command-line entry point.
"""

# ============================================================================
# 文件头注释 (File Header)
# POSITION: 模块初始化文件 - 导出scheduler模块的实验执行类(ExperimentRunner/ExperimentSpec)
# ============================================================================

from .experiment_runner import ExperimentRunner, ExperimentSpec, run_experiment, separation_experiment

__all__ = [
    'ExperimentRunner',
    'ExperimentSpec',
    'run_experiment',
    'separation_experiment',
]
