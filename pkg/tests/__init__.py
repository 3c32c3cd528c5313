"""
Test suite for the private MST toolkit.
"""

# ============================================================================
# 文件头注释 (File Header)
# POSITION: 模块初始化文件 - 测试套件的包定义,使 core/tools/scheduler 可从仓库根目录导入
# ============================================================================
