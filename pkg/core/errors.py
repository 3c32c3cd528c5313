"""
Error types shared by every layer.

Each error carries the process exit code the CLI maps it to.
"""

# INPUT:  无外部依赖
# OUTPUT: MSTPrivacyError, InputValidationError, GuardExceededError, NumericsError
# POSITION: Core 层 - 错误类型定义，CLI 根据 exit_code 返回退出码


class MSTPrivacyError(Exception):
    """Base class for all toolkit errors."""

    exit_code = 1


class InputValidationError(MSTPrivacyError, ValueError):
    """Malformed graph, weights, tree, parameters or input files."""

    exit_code = 1


class GuardExceededError(MSTPrivacyError):
    """An exhaustive oracle was asked to enumerate more than its guard allows."""

    exit_code = 2

    def __init__(self, what: str, size: float, limit: int):
        super().__init__(f"{what}: {size:.4g} exceeds the enumeration guard of {limit}")
        self.size = size
        self.limit = limit


class NumericsError(MSTPrivacyError):
    """A numeric invariant broke (singular Laplacian, probability far outside [0, 1])."""

    exit_code = 3
