"""
Tools module: tree sampler, mechanisms, tree-space combinatorics, lower bounds,
privacy audits, graph generators and file management.
"""

# ============================================================================
# 文件头注释 (File Header)
# POSITION: 模块初始化文件 - 导出tools模块的常用入口(release/dissimilar_set/FileManager 等)
# ============================================================================

from .file_manager import FileManager
from .graph_generators import generate_graph
from .lower_bounds import build_packing_instance, lower_bound_value, stress_mechanism, verify_disjointness
from .mechanisms import exponential_mechanism, laplace_mechanism, release
from .privacy_audit import audit_mechanism
from .tree_sampler import sample_spanning_tree, tree_sum
from .tree_space import dissimilar_set, embed_code, gv_code, iterated_exchange

__all__ = [
    'FileManager',
    'generate_graph',
    'build_packing_instance',
    'lower_bound_value',
    'stress_mechanism',
    'verify_disjointness',
    'exponential_mechanism',
    'laplace_mechanism',
    'release',
    'audit_mechanism',
    'sample_spanning_tree',
    'tree_sum',
    'dissimilar_set',
    'embed_code',
    'gv_code',
    'iterated_exchange',
]
