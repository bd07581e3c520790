"""
示例图网格

在示例脊线 torus_curve(0.6, 0.4, 1, 2) 上按三种半径生成 OBJ 网格与点文件，
并在 manifest.json 中记录所用的 u 窗口、网格尺寸与半径函数。
"""

import logging
import math
import os
from dataclasses import dataclass
from typing import Any, Dict, List, Tuple

from canal4d.geometry.curves import CurveSpec, make_curve
from canal4d.geometry.frames import FramedCurve, frame_curve
from canal4d.geometry.radius import RadiusFunction
from canal4d.meshio.sampling import GridSpec, build_mesh, sample_patch
from canal4d.meshio.writers import write_manifest, write_obj, write_points
from canal4d.utils.file_utils import FileUtils
from canal4d.utils.logger_utils import ProgressLogger

logger = logging.getLogger(__name__)

SPINE = (0.6, 0.4, 1.0, 2.0)
FRAME_STEP = 1e-3
GRID_NU = 60
GRID_NV = 40


@dataclass(frozen=True)
class FigureSpec:
    name: str
    radius: RadiusFunction
    u_range: Tuple[float, float]


def default_figures() -> List[FigureSpec]:
    """三个示例半径：2u+6、u²、cos(u²)，窗口内半径均为正"""
    return [
        FigureSpec("figure1", RadiusFunction.linear(2.0, 6.0), (0.0, 2.0 * math.pi)),
        FigureSpec("figure2", RadiusFunction.quadratic(), (0.5, 2.5)),
        FigureSpec("figure3", RadiusFunction.cos_sq(), (0.0, 1.2)),
    ]


def example_spine(h: float = FRAME_STEP) -> FramedCurve:
    """示例脊线在 [0, 2π] 上的平行传输标架"""
    curve = make_curve(CurveSpec.torus_curve(*SPINE))
    return frame_curve(curve, 0.0, 2.0 * math.pi, h)


def generate_figures(
    out_dir: str,
    figures: List[FigureSpec] = None,
    nu: int = GRID_NU,
    nv: int = GRID_NV,
    workers: int = 1,
) -> List[Dict[str, Any]]:
    """
    生成示例图网格

    Args:
        out_dir: 输出目录
        figures: 要生成的图，默认 default_figures()
        nu: u 方向网格点数
        nv: v 方向网格点数
        workers: 采样线程数

    Returns:
        List[Dict[str, Any]]: 清单条目，与 manifest.json 的内容一致

    Raises:
        IoError: 输出目录不可写
        NonpositiveRadius: 半径在窗口内非正
    """
    figures = figures if figures is not None else default_figures()
    FileUtils.ensure_directory_exists(out_dir)
    fc = example_spine()
    progress = ProgressLogger(len(figures), "示例图生成")

    entries = []
    for spec in figures:
        grid = GridSpec(nu, nv, spec.u_range)
        sample = sample_patch(fc, spec.radius, grid, with_curvature=False, workers=workers)
        mesh = build_mesh(sample)

        name = FileUtils.safe_filename(spec.name)
        obj_path = os.path.join(out_dir, f"{name}.obj")
        points_path = os.path.join(out_dir, f"{name}.dat")
        write_obj(mesh, obj_path)
        write_points(sample, points_path)

        entries.append(
            {
                "name": spec.name,
                "radius": spec.radius.to_dict(),
                "radius_expr": spec.radius.describe(),
                "u_range": list(grid.u_range),
                "v_range": [0.0, 2.0 * math.pi],
                "nu": nu,
                "nv": nv,
                "vertices": int(len(mesh.vertices)),
                "faces": int(len(mesh.faces)),
                "spine": {"kind": "torus_curve", "a": SPINE[0], "b": SPINE[1], "c": SPINE[2], "d": SPINE[3]},
                "frame_step": FRAME_STEP,
                "obj": os.path.basename(obj_path),
                "points": os.path.basename(points_path),
            }
        )
        progress.update(message=spec.name)

    write_manifest(entries, os.path.join(out_dir, "manifest.json"))
    progress.finish()
    return entries
