"""
分析模块 - 有限差分 oracle 与整体性质检验
"""

from .oracle import OracleConfig, oracle_curvature

__all__ = ["OracleConfig", "oracle_curvature"]
