"""
输出文件写入

OBJ 网格、曲率场 CSV、标架 CSV、gnuplot 点文件以及 JSON 清单/报告。
浮点数一律使用最短往返格式（repr），换行符为 LF。
"""

import logging
from typing import Any, Dict, List

import numpy as np
import pandas as pd

from canal4d.exceptions import InvalidParameter, IoError
from canal4d.geometry.frames import FramedCurve
from canal4d.meshio.sampling import PatchSample, TriMesh, project_points
from canal4d.utils.file_utils import FileUtils

logger = logging.getLogger(__name__)

FIELD_COLUMNS = [
    "u", "v", "E", "F", "G", "f", "g", "K", "H",
    "Hvec_T", "Hvec_M1", "Hvec_M2", "Hvec_M3", "regular",
]

FRAME_COLUMNS = (
    ["u", "x1", "x2", "x3", "x4"]
    + [f"T{i}" for i in range(1, 5)]
    + [f"M{j}{i}" for j in range(1, 4) for i in range(1, 5)]
    + ["k1", "k2", "k3"]
)


def _fmt(x: float) -> str:
    return repr(float(x))


def _write_frame(df: pd.DataFrame, path: str):
    FileUtils.ensure_parent_dir(path)
    try:
        df.to_csv(path, index=False, lineterminator="\n")
    except OSError as e:
        raise IoError("写入 CSV 失败", f"{path}: {e}")


def format_obj(mesh: TriMesh) -> str:
    """OBJ 文本：先 v 行，再 f 行（下标从 1 开始）"""
    mesh.validate()
    lines = [f"v {_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in mesh.vertices]
    lines.extend(f"f {a + 1} {b + 1} {c + 1}" for a, b, c in mesh.faces)
    return "\n".join(lines) + "\n"


def write_obj(mesh: TriMesh, path: str):
    """
    写入 Wavefront OBJ 文件（不含法向与纹理坐标）

    Args:
        mesh: 三角网格
        path: 输出路径

    Raises:
        InvalidMesh: 网格不满足不变量
        IoError: 写入失败
    """
    FileUtils.write_text(path, format_obj(mesh))
    logger.info(f"已写入 OBJ: {path}（{len(mesh.vertices)} 个顶点，{len(mesh.faces)} 个面）")


def fields_frame(sample: PatchSample) -> pd.DataFrame:
    """曲率场表格，行优先（u 为外层）"""
    if not sample.has_curvature:
        raise InvalidParameter("采样结果不含曲率，无法导出曲率场")
    nu, nv = sample.grid.nu, sample.grid.nv
    uu, vv = np.meshgrid(sample.grid.us, sample.grid.vs, indexing="ij")
    hframe = sample.Hvec_frame.reshape(nu * nv, 4)
    return pd.DataFrame(
        {
            "u": uu.reshape(-1),
            "v": vv.reshape(-1),
            "E": sample.E.reshape(-1),
            "F": sample.F.reshape(-1),
            "G": sample.G.reshape(-1),
            "f": sample.f.reshape(-1),
            "g": sample.g.reshape(-1),
            "K": sample.K.reshape(-1),
            "H": sample.H.reshape(-1),
            "Hvec_T": hframe[:, 0],
            "Hvec_M1": hframe[:, 1],
            "Hvec_M2": hframe[:, 2],
            "Hvec_M3": hframe[:, 3],
            "regular": sample.regular.reshape(-1).astype(int),
        },
        columns=FIELD_COLUMNS,
    )


def write_csv_fields(sample: PatchSample, path: str):
    """
    写入曲率场 CSV

    Args:
        sample: 含曲率的采样结果
        path: 输出路径

    Raises:
        IoError: 写入失败
    """
    _write_frame(fields_frame(sample), path)
    logger.info(f"已写入曲率场: {path}（{sample.grid.size} 行）")


def framed_frame(fc: FramedCurve) -> pd.DataFrame:
    rows = np.hstack(
        [
            fc.grid.reshape(-1, 1),
            fc.points,
            fc.matrices.reshape(len(fc), 16),
            fc.k,
        ]
    )
    return pd.DataFrame(rows, columns=FRAME_COLUMNS)


def write_framed_csv(fc: FramedCurve, path: str):
    """写入标架 CSV：每个节点一行，含点、T、M₁..M₃ 与 k₁..k₃"""
    _write_frame(framed_frame(fc), path)
    logger.info(f"已写入标架: {path}（{len(fc)} 个节点）")


def format_points(sample: PatchSample) -> str:
    """gnuplot splot 格式：每个 u 行一块 `x y z`，块之间空一行；v 方向闭合"""
    projected = project_points(sample.points)
    blocks = []
    for row in projected:
        closed = np.vstack([row, row[:1]])
        blocks.append("\n".join(f"{_fmt(x)} {_fmt(y)} {_fmt(z)}" for x, y, z in closed))
    return "\n\n".join(blocks) + "\n"


def write_points(sample: PatchSample, path: str):
    FileUtils.write_text(path, format_points(sample))
    logger.info(f"已写入点文件: {path}")


def write_manifest(entries: List[Dict[str, Any]], path: str):
    """写入 figures 清单（u 窗口、网格尺寸、半径函数与输出文件）"""
    FileUtils.write_json(path, {"figures": entries})
    logger.info(f"已写入清单: {path}")


def write_report(results: List[Dict[str, Any]], path: str):
    """写入检验报告：每项检验一个 {check, params, max_residual, tolerance, pass} 对象"""
    FileUtils.write_json(path, results)
    logger.info(f"已写入检验报告: {path}（{len(results)} 项）")
