"""
整体性质检验

Weingarten 条件、线性 Weingarten 证书、平坦性、极小性，以及闭式公式与
有限差分 oracle 的等价性检验。
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from canal4d.analysis.oracle import OracleConfig, oracle_curvature
from canal4d.exceptions import (
    BranchViolation,
    GridTooSmall,
    InvalidParameter,
    Irregular,
    NonOrthogonalPatch,
    NotATube,
    OutOfDomain,
    TubeSingular,
    WrongMode,
)
from canal4d.geometry.canal import (
    gauss_K,
    mean_scalar,
    mean_vector,
    surface_jet,
    surface_point,
)
from canal4d.geometry.frames import FramedCurve
from canal4d.geometry.radius import RadiusFunction
from canal4d.meshio.sampling import GridSpec

logger = logging.getLogger(__name__)

STRAIGHT_TOL = 1e-12
FLAT_TOL = 1e-12


@dataclass(frozen=True)
class WeingartenReport:
    """K_u H_v − K_v H_u 的最大值以及 K_v、H_v 的最大值"""

    max_jacobian: float
    max_Kv: float
    max_Hv: float
    shape: Tuple[int, int]
    tolerance: float

    @property
    def is_weingarten(self) -> bool:
        return self.max_jacobian <= self.tolerance


@dataclass(frozen=True)
class LinearWeingartenCert:
    """aK + bH = c 的系数与网格上的最大残差"""

    a: float
    b: float
    c: float
    residual: float


@dataclass(frozen=True)
class MinimalRadiusParams:
    """极小半径参数：2r + 2√(r² − c₁²) = e^(u/c₁ + c₂)"""

    c1: float
    c2: float

    def __post_init__(self):
        if not self.c1 > 0:
            raise InvalidParameter("极小半径需要 c1 > 0", f"c1={self.c1}")

    @property
    def C(self) -> float:
        """cosh 解中的相位 C = c₂ − ln(2c₁)"""
        return self.c2 - math.log(2.0 * self.c1)

    def principal_start(self) -> float:
        """主分支 u/c₁ + C ≥ 0 的起点"""
        return -self.C * self.c1


@dataclass(frozen=True)
class FlatnessReport:
    max_abs_K: float
    is_flat: bool


@dataclass(frozen=True)
class EquivalenceReport:
    """闭式公式与 oracle 的最大误差（以 max(1, |oracle|) 归一）"""

    max_K_error: float
    max_Hvec_error: float
    points: int
    skipped: int


def _central_interior(field: np.ndarray, du: float, dv: float) -> Tuple[np.ndarray, np.ndarray]:
    d_u = (field[2:, 1:-1] - field[:-2, 1:-1]) / (2.0 * du)
    d_v = (field[1:-1, 2:] - field[1:-1, :-2]) / (2.0 * dv)
    return d_u, d_v


def weingarten_check(
    K: np.ndarray, H: np.ndarray, du: float, dv: float, tol: float = 1e-8
) -> WeingartenReport:
    """
    检验 K_u H_v − K_v H_u = 0

    Args:
        K: (nu, nv) 高斯曲率场
        H: (nu, nv) 平均曲率场
        du: u 方向步长
        dv: v 方向步长
        tol: 判定阈值（闭式场 1e-8，oracle 场 1e-4）

    Returns:
        WeingartenReport: 内部点上的最大 Jacobian 与 K_v、H_v

    Raises:
        GridTooSmall: 网格小于 5×5
    """
    K = np.asarray(K, dtype=np.float64)
    H = np.asarray(H, dtype=np.float64)
    if K.shape != H.shape or K.ndim != 2:
        raise InvalidParameter("K 与 H 必须是同形状的二维数组", f"{K.shape} vs {H.shape}")
    if K.shape[0] < 5 or K.shape[1] < 5:
        raise GridTooSmall("Weingarten 检验需要至少 5×5 的网格", f"{K.shape}")
    if not (du > 0 and dv > 0):
        raise InvalidParameter("网格步长必须为正", f"du={du}, dv={dv}")

    K_u, K_v = _central_interior(K, du, dv)
    H_u, H_v = _central_interior(H, du, dv)
    jacobian = K_u * H_v - K_v * H_u
    report = WeingartenReport(
        max_jacobian=float(np.nanmax(np.abs(jacobian))),
        max_Kv=float(np.nanmax(np.abs(K_v))),
        max_Hv=float(np.nanmax(np.abs(H_v))),
        shape=K.shape,
        tolerance=tol,
    )
    logger.info(f"Weingarten 检验：max|K_uH_v−K_vH_u|={report.max_jacobian:.3e}")
    return report


def is_straight(fc: FramedCurve) -> bool:
    """脊线是否为直线（所有节点上 kᵢ = 0）"""
    return bool(np.max(np.abs(fc.k)) <= STRAIGHT_TOL)


def linear_weingarten_cert(
    fc: FramedCurve, rad: RadiusFunction, k: float, grid: GridSpec
) -> LinearWeingartenCert:
    """
    直线脊线上的管面满足 aK + bH = c，取 (a, b, c) = (0, 2r₀k, k)

    Args:
        fc: 直线脊线
        rad: 常数半径 r₀
        k: 非零常数
        grid: 计算残差的网格

    Returns:
        LinearWeingartenCert: 系数与 max |aK + bH − c|

    Raises:
        NotATube: 半径不是常数或脊线不是直线
    """
    if not rad.is_constant:
        raise NotATube("线性 Weingarten 证书需要常数半径", rad.describe())
    if not is_straight(fc):
        raise NotATube("线性 Weingarten 证书需要直线脊线", f"max|k|={np.max(np.abs(fc.k)):.3e}")
    if k == 0:
        raise InvalidParameter("k 不能为 0（(a,b,c) 不能全为零）")

    r0 = rad.evaluate(grid.us[0])[0]
    a, b, c = 0.0, 2.0 * r0 * k, float(k)
    residual = 0.0
    for u in grid.us:
        for v in grid.vs:
            jet = surface_jet(fc, rad, float(u), float(v))
            K = gauss_K(jet, "straight")
            H = mean_scalar(jet, "straight")
            residual = max(residual, abs(a * K + b * H - c))
    return LinearWeingartenCert(a=a, b=b, c=c, residual=residual)


def minimal_radius(
    params: MinimalRadiusParams,
    domain: Tuple[float, float],
    allow_branch_crossing: bool = False,
) -> RadiusFunction:
    """
    隐式关系 2r + 2√(r² − c₁²) = e^(u/c₁+c₂) 的显式解 r = c₁cosh(u/c₁ + C)

    Args:
        params: (c₁, c₂)
        domain: 使用区间
        allow_branch_crossing: 允许区间越过主分支起点（此时隐式关系只在 u/c₁ + C ≥ 0 处成立）

    Returns:
        RadiusFunction: cosh_scaled 半径

    Raises:
        BranchViolation: 区间含 u/c₁ + C < 0 的点且未允许越过
    """
    lo = float(domain[0])
    if not allow_branch_crossing and lo / params.c1 + params.C < 0:
        raise BranchViolation(
            "区间越过极小半径隐式关系的主分支",
            f"u={lo} 处 u/c1+C={lo / params.c1 + params.C:.6g} < 0",
        )
    return RadiusFunction.cosh_scaled(params.c1, params.C)


def minimal_relation_residual(params: MinimalRadiusParams, u: float) -> float:
    """(2r + 2√(r² − c₁²) − e^(u/c₁+c₂)) / e^(u/c₁+c₂)"""
    r = params.c1 * math.cosh(u / params.c1 + params.C)
    rhs = math.exp(u / params.c1 + params.c2)
    lhs = 2.0 * r + 2.0 * math.sqrt(max(r * r - params.c1**2, 0.0))
    return (lhs - rhs) / rhs


def verify_minimal(
    fc: FramedCurve,
    rad: RadiusFunction,
    grid: GridSpec,
    method: str = "closed",
    cfg: Optional[OracleConfig] = None,
) -> float:
    """
    直线脊线运河曲面在网格上的 max |H|

    Args:
        fc: 直线脊线（范围需覆盖 grid 及 oracle 模板）
        rad: 半径函数
        grid: 网格
        method: "closed" 使用直线脊线的闭式公式；"oracle" 使用有限差分

    Returns:
        float: 最大平均曲率
    """
    if not is_straight(fc):
        raise WrongMode("极小性检验需要直线脊线", f"max|k|={np.max(np.abs(fc.k)):.3e}")
    if method not in ("closed", "oracle"):
        raise InvalidParameter(f"未知的检验方法: {method}", "可选: closed, oracle")

    def sampler(u: float, v: float) -> np.ndarray:
        return surface_point(fc, rad, u, v)

    worst = 0.0
    for u in grid.us:
        for v in grid.vs:
            if method == "closed":
                H = mean_scalar(surface_jet(fc, rad, float(u), float(v)), "straight")
            else:
                H = oracle_curvature(sampler, float(u), float(v), cfg, fc.u_range).H
            worst = max(worst, H)
    logger.info(f"极小性检验（{method}）：max|H|={worst:.3e}")
    return worst


def flatness_check(fc: FramedCurve, rad: RadiusFunction, grid: GridSpec) -> FlatnessReport:
    """直线脊线运河曲面在网格上的 max |K|；max ≤ 1e-12 视为平坦"""
    worst = 0.0
    for u in grid.us:
        for v in grid.vs:
            worst = max(worst, abs(gauss_K(surface_jet(fc, rad, float(u), float(v)), "straight")))
    return FlatnessReport(max_abs_K=worst, is_flat=worst <= FLAT_TOL)


def equivalence_check(
    fc: FramedCurve,
    rad: RadiusFunction,
    grid: GridSpec,
    cfg: Optional[OracleConfig] = None,
) -> EquivalenceReport:
    """
    一般模式的闭式 K、H⃗ 与有限差分 oracle 的逐点比较

    不正则点跳过并计数。
    """
    def sampler(u: float, v: float) -> np.ndarray:
        return surface_point(fc, rad, u, v)

    max_K = max_H = 0.0
    points = skipped = 0
    for u in grid.us:
        for v in grid.vs:
            jet = surface_jet(fc, rad, float(u), float(v))
            try:
                K = gauss_K(jet, "general")
                Hvec = mean_vector(jet, "general")
                oracle = oracle_curvature(sampler, float(u), float(v), cfg, fc.u_range)
            except (Irregular, TubeSingular, NonOrthogonalPatch, OutOfDomain):
                skipped += 1
                continue
            max_K = max(max_K, abs(K - oracle.K) / max(1.0, abs(oracle.K)))
            scale = max(1.0, float(np.linalg.norm(oracle.Hvec)))
            max_H = max(max_H, float(np.linalg.norm(Hvec - oracle.Hvec)) / scale)
            points += 1

    logger.info(f"等价性检验：{points} 个点，跳过 {skipped} 个；K 误差 {max_K:.3e}，H⃗ 误差 {max_H:.3e}")
    return EquivalenceReport(max_K_error=max_K, max_Hvec_error=max_H, points=points, skipped=skipped)
