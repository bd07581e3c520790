"""
网格采样与投影

在 (u, v) 网格上采样运河曲面及其曲率，按 (x₁, x₂, x₃+x₄) 投影到三维，
并把网格缝合为三角网格（v 方向首尾相接）。
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from canal4d.exceptions import GridTooSmall, InvalidMesh, InvalidParameter
from canal4d.geometry.canal import CurvatureData, curvature_at, surface_point
from canal4d.geometry.frames import FramedCurve
from canal4d.geometry.radius import RadiusFunction
from canal4d.utils.logger_utils import ProgressLogger

logger = logging.getLogger(__name__)

MAX_GRID_POINTS = 10**7


@dataclass(frozen=True)
class GridSpec:
    """
    参数网格：u 取 nu 个等距值（含端点），v 在 [0, 2π) 上取 nv 个等距值
    """

    nu: int
    nv: int
    u_range: Tuple[float, float]

    def __post_init__(self):
        if self.nu < 2 or self.nv < 2:
            raise GridTooSmall("网格尺寸必须满足 nu, nv ≥ 2", f"nu={self.nu}, nv={self.nv}")
        if self.nu * self.nv > MAX_GRID_POINTS:
            raise InvalidParameter("网格点数超过上限 1e7", f"nu·nv={self.nu * self.nv}")
        lo, hi = float(self.u_range[0]), float(self.u_range[1])
        if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
            raise InvalidParameter("u 范围必须是有限区间且 u_a < u_b", f"{self.u_range}")
        object.__setattr__(self, "u_range", (lo, hi))

    @property
    def us(self) -> np.ndarray:
        return np.linspace(self.u_range[0], self.u_range[1], self.nu)

    @property
    def vs(self) -> np.ndarray:
        return 2.0 * math.pi * np.arange(self.nv) / self.nv

    @property
    def du(self) -> float:
        return (self.u_range[1] - self.u_range[0]) / (self.nu - 1)

    @property
    def dv(self) -> float:
        return 2.0 * math.pi / self.nv

    @property
    def size(self) -> int:
        return self.nu * self.nv


@dataclass(frozen=True, eq=False)
class PatchSample:
    """
    网格采样结果，所有数组按 (nu, nv) 行优先排列（u 为外层）

    不正则点的 K、H、Hvec 为 NaN，regular 为 False。
    """

    grid: GridSpec
    points: np.ndarray
    K: Optional[np.ndarray] = None
    H: Optional[np.ndarray] = None
    Hvec: Optional[np.ndarray] = None
    Hvec_frame: Optional[np.ndarray] = None
    E: Optional[np.ndarray] = None
    F: Optional[np.ndarray] = None
    G: Optional[np.ndarray] = None
    f: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None
    regular: Optional[np.ndarray] = None

    @property
    def has_curvature(self) -> bool:
        return self.K is not None

    @property
    def irregular_count(self) -> int:
        return 0 if self.regular is None else int(np.count_nonzero(~self.regular))

    def curvature_at(self, i: int, j: int) -> CurvatureData:
        """网格点 (i, j) 的曲率数据"""
        if not self.has_curvature:
            raise InvalidParameter("该采样没有计算曲率")
        return CurvatureData(
            u=float(self.grid.us[i]),
            v=float(self.grid.vs[j]),
            E=float(self.E[i, j]),
            F=float(self.F[i, j]),
            G=float(self.G[i, j]),
            f=float(self.f[i, j]),
            g=float(self.g[i, j]),
            K=float(self.K[i, j]),
            Hvec=self.Hvec[i, j],
            Hvec_frame=self.Hvec_frame[i, j],
            H=float(self.H[i, j]),
            regular=bool(self.regular[i, j]),
        )


_FIELDS = ("K", "H", "Hvec", "Hvec_frame", "E", "F", "G", "f", "g", "regular")


def _sample_row(fc: FramedCurve, rad: RadiusFunction, u: float, vs: np.ndarray, with_curvature: bool):
    points = np.array([surface_point(fc, rad, u, float(v)) for v in vs])
    if not with_curvature:
        return points, None
    data = [curvature_at(fc, rad, u, float(v)) for v in vs]
    return points, {name: np.array([getattr(d, name) for d in data]) for name in _FIELDS}


def sample_patch(
    fc: FramedCurve,
    rad: RadiusFunction,
    gs: GridSpec,
    with_curvature: bool = True,
    workers: int = 1,
) -> PatchSample:
    """
    在网格上采样曲面

    Args:
        fc: 带标架的脊线
        rad: 半径函数
        gs: 网格
        with_curvature: 是否同时计算曲率（一般模式）
        workers: 按行并行的线程数

    Returns:
        PatchSample: 点与曲率场

    Raises:
        NonpositiveRadius: 记录第一个 r ≤ 0 的 u
    """
    us, vs = gs.us, gs.vs
    rad.check_positive(us)
    logger.info(f"开始采样曲面：{gs.nu}×{gs.nv}，{rad.describe()}")
    progress = ProgressLogger(gs.nu, "曲面采样")

    def run(u: float):
        row = _sample_row(fc, rad, float(u), vs, with_curvature)
        progress.update()
        return row

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            rows = list(executor.map(run, us))
    else:
        rows = [run(u) for u in us]

    points = np.stack([row[0] for row in rows])
    fields = {}
    if with_curvature:
        fields = {name: np.stack([row[1][name] for row in rows]) for name in _FIELDS}
        fields["regular"] = fields["regular"].astype(bool)
    sample = PatchSample(grid=gs, points=points, **fields)

    if sample.irregular_count:
        logger.warning(f"采样中有 {sample.irregular_count} 个不正则点")
    progress.finish()
    return sample


def project3(p: Sequence[float]) -> Tuple[float, float, float]:
    """四维点投影到三维：(x₁, x₂, x₃ + x₄)"""
    return float(p[0]), float(p[1]), float(p[2]) + float(p[3])


def project_points(points: np.ndarray) -> np.ndarray:
    """project3 的数组版本，最后一维为 4"""
    pts = np.asarray(points, dtype=np.float64)
    return np.stack([pts[..., 0], pts[..., 1], pts[..., 2] + pts[..., 3]], axis=-1)


@dataclass(frozen=True, eq=False)
class TriMesh:
    """三角网格；面的顶点下标从 0 开始"""

    vertices: np.ndarray
    faces: np.ndarray
    K: Optional[np.ndarray] = None
    H: Optional[np.ndarray] = None

    def validate(self):
        """
        检查网格不变量

        Raises:
            InvalidMesh: 空网格、形状错误或面下标越界
        """
        if self.vertices.size == 0 or self.faces.size == 0:
            raise InvalidMesh("网格为空")
        if self.vertices.ndim != 2 or self.vertices.shape[1] != 3:
            raise InvalidMesh("顶点数组形状应为 (n, 3)", f"{self.vertices.shape}")
        if self.faces.ndim != 2 or self.faces.shape[1] != 3:
            raise InvalidMesh("面数组形状应为 (m, 3)", f"{self.faces.shape}")
        if self.faces.min() < 0 or self.faces.max() >= len(self.vertices):
            raise InvalidMesh("面下标越界", f"顶点数 {len(self.vertices)}")
        if not np.all(np.isfinite(self.vertices)):
            raise InvalidMesh("顶点坐标必须有限")


def grid_faces(nu: int, nv: int) -> np.ndarray:
    """(nu, nv) 网格的三角面，v 方向首尾缝合，共 2·(nu−1)·nv 个"""
    faces = []
    for i in range(nu - 1):
        for j in range(nv):
            a = i * nv + j
            b = i * nv + (j + 1) % nv
            c = (i + 1) * nv + j
            d = (i + 1) * nv + (j + 1) % nv
            faces.append((a, b, d))
            faces.append((a, d, c))
    return np.array(faces, dtype=np.int64)


def build_mesh(sample: PatchSample) -> TriMesh:
    """由采样结果构造投影后的三角网格"""
    nu, nv = sample.grid.nu, sample.grid.nv
    vertices = project_points(sample.points).reshape(nu * nv, 3)
    mesh = TriMesh(
        vertices=vertices,
        faces=grid_faces(nu, nv),
        K=None if sample.K is None else sample.K.reshape(-1),
        H=None if sample.H is None else sample.H.reshape(-1),
    )
    mesh.validate()
    return mesh
