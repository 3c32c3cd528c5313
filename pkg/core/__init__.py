"""
Core module: data model, errors and graph_core operations.
"""

# POSITION: 模块初始化文件

from .state import Graph, SpanningTree, NeighborRelation, MechanismConfig
from .errors import MSTPrivacyError, InputValidationError, GuardExceededError, NumericsError

__all__ = [
    'Graph',
    'SpanningTree',
    'NeighborRelation',
    'MechanismConfig',
    'MSTPrivacyError',
    'InputValidationError',
    'GuardExceededError',
    'NumericsError',
]
