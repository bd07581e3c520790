"""
几何模块

四维向量与标架、脊线、平行传输标架、半径函数与运河曲面的闭式曲率。
"""

from .canal import CurvatureData, curvature_at, surface_jet, surface_point
from .curves import Curve, CurveSpec, make_curve
from .frames import FramedCurve, frame_curve, propagate, seed_frame
from .radius import RadiusFunction
from .vectors import Frame4, complete_frame, gram_schmidt

__all__ = [
    "CurvatureData",
    "Curve",
    "CurveSpec",
    "Frame4",
    "FramedCurve",
    "RadiusFunction",
    "complete_frame",
    "curvature_at",
    "frame_curve",
    "gram_schmidt",
    "make_curve",
    "propagate",
    "seed_frame",
    "surface_jet",
    "surface_point",
]
