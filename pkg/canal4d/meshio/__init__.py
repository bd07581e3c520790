"""
网格采样与文件输出
"""

from .sampling import GridSpec, TriMesh, build_mesh, project3, sample_patch

__all__ = ["GridSpec", "TriMesh", "build_mesh", "project3", "sample_patch"]
