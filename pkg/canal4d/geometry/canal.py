"""
运河曲面

X(u,v) = γ(u) + r(u)(M2(u)cos v + M3(u)sin v) 的闭式曲率计算：
第一、第二基本形式，高斯曲率 K，平均曲率向量 H⃗ 与平均曲率 H = |H⃗|。
管面（r 为常数）与直线脊线两种特殊情形有各自的公式。
"""

import logging
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Tuple

import numpy as np

from canal4d.exceptions import (
    FormulaMismatch,
    InvalidParameter,
    Irregular,
    NonOrthogonalPatch,
    NonpositiveRadius,
    TubeSingular,
    WrongMode,
)
from canal4d.geometry.frames import FramedCurve
from canal4d.geometry.radius import RadiusFunction
from canal4d.geometry.vectors import Frame4

logger = logging.getLogger(__name__)

MODES = ("general", "tube", "straight")
REGULARITY_TOL = 1e-14
MODE_TOL = 1e-12
TUBE_F_TOL = 1e-12
GENERIC_F_TOL = 1e-8
SCALAR_CHECK_RTOL = 1e-6


@dataclass(frozen=True, eq=False)
class SurfaceJet:
    """曲面片在 (u, v) 处的全部偏导数数据"""

    u: float
    v: float
    X: np.ndarray
    Xu: np.ndarray
    Xv: np.ndarray
    Xuu: np.ndarray
    Xuv: np.ndarray
    Xvv: np.ndarray
    f: float
    g: float
    f_u: float
    f_v: float
    frame: Frame4
    k: np.ndarray
    dk: np.ndarray
    r: float
    r1: float
    r2: float

    @property
    def D(self) -> float:
        """D = f r″ − g r′"""
        return self.f * self.r2 - self.g * self.r1


@dataclass(frozen=True)
class FirstFundamental:
    """第一基本形式（内积定义），以及与闭式 E = f²+r′², F = 0, G = r² 的偏差"""

    E: float
    F: float
    G: float
    W2: float
    defect: float = 0.0


@dataclass(frozen=True, eq=False)
class SecondFundamental:
    """第二基本形式向量（环境坐标）"""

    huu: np.ndarray
    huv: np.ndarray
    hvv: np.ndarray

    def in_frame(self, frame: Frame4) -> np.ndarray:
        """三个向量在 (T, M1, M2, M3) 下的分量，形状 (3, 4)"""
        return np.vstack([frame.components(h) for h in (self.huu, self.huv, self.hvv)])


@dataclass(frozen=True, eq=False)
class CurvatureData:
    """一点处的曲率数据；不正则点 K、H 为 NaN"""

    u: float
    v: float
    E: float
    F: float
    G: float
    f: float
    g: float
    K: float
    Hvec: np.ndarray
    Hvec_frame: np.ndarray
    H: float
    regular: bool


@dataclass(frozen=True)
class MeanScalarReport:
    """|H⃗| 与标量公式的对比"""

    H: float
    formula: float
    signed_formula: float
    relative_gap: float


@dataclass(frozen=True)
class CollapseReport:
    """特殊情形公式与一般公式的最大差"""

    kind: str
    max_K: float
    max_Hvec: float
    max_H: float
    points: int

    @property
    def max_residual(self) -> float:
        return max(self.max_K, self.max_Hvec, self.max_H)


# ---------------------------------------------------------------- 曲面求值


def _radius_at(rad: RadiusFunction, u: float) -> Tuple[float, float, float]:
    r, r1, r2 = rad.evaluate(u)
    if not r > 0:
        raise NonpositiveRadius(f"半径在 u={u} 处非正", f"{rad.describe()}: r={r!r}", u=u)
    return r, r1, r2


def surface_point(
    fc: FramedCurve, rad: RadiusFunction, u: float, v: float, method: str = "rk4"
) -> np.ndarray:
    """
    曲面上的点 X(u, v)

    Args:
        fc: 带标架的脊线
        rad: 半径函数
        u: 网格范围内的参数
        v: 圆周角
        method: 节点之间的标架求值方法

    Returns:
        np.ndarray: 四维点

    Raises:
        NonpositiveRadius: r(u) ≤ 0
    """
    r = _radius_at(rad, u)[0]
    matrix = fc.frame_matrix_at(u, method)
    return fc.curve.position(u) + r * (math.cos(v) * matrix[2] + math.sin(v) * matrix[3])


def surface_jet(
    fc: FramedCurve, rad: RadiusFunction, u: float, v: float, method: str = "rk4"
) -> SurfaceJet:
    """
    计算 (u, v) 处的全部偏导数

    f = 1 − k₂r cos v − k₃r sin v，g = f_u − k₂r′cos v − k₃r′sin v，
    其中 f_u 用到的 kᵢ′ 来自节点值的中心差分。
    """
    r, r1, r2 = _radius_at(rad, u)
    matrix = fc.frame_matrix_at(u, method)
    k, dk = fc.curvatures_at(matrix, u)
    T, M1, M2, M3 = matrix
    k1, k2, k3 = k
    cv, sv = math.cos(v), math.sin(v)

    f = 1.0 - k2 * r * cv - k3 * r * sv
    f_v = k2 * r * sv - k3 * r * cv
    f_u = -(dk[1] * r + k2 * r1) * cv - (dk[2] * r + k3 * r1) * sv
    g = f_u - k2 * r1 * cv - k3 * r1 * sv

    return SurfaceJet(
        u=float(u),
        v=float(v),
        X=fc.curve.position(u) + r * (cv * M2 + sv * M3),
        Xu=f * T + r1 * cv * M2 + r1 * sv * M3,
        Xv=-r * sv * M2 + r * cv * M3,
        Xuu=g * T + f * k1 * M1 + (f * k2 + r2 * cv) * M2 + (f * k3 + r2 * sv) * M3,
        Xuv=f_v * T - r1 * sv * M2 + r1 * cv * M3,
        Xvv=-r * cv * M2 - r * sv * M3,
        f=float(f),
        g=float(g),
        f_u=float(f_u),
        f_v=float(f_v),
        frame=Frame4(matrix),
        k=np.asarray(k),
        dk=np.asarray(dk),
        r=float(r),
        r1=float(r1),
        r2=float(r2),
    )


def first_form(jet: SurfaceJet) -> FirstFundamental:
    """
    第一基本形式

    返回内积定义的 E, F, G；闭式 E = f²+r′², G = r² 与之的偏差记录在 defect 中。

    Raises:
        Irregular: W² = EG − F² ≤ 1e-14
    """
    E = float(np.dot(jet.Xu, jet.Xu))
    F = float(np.dot(jet.Xu, jet.Xv))
    G = float(np.dot(jet.Xv, jet.Xv))
    W2 = E * G - F * F
    defect = max(abs(E - (jet.f**2 + jet.r1**2)), abs(F), abs(G - jet.r**2))
    if W2 <= REGULARITY_TOL:
        raise Irregular(f"曲面在 (u,v)=({jet.u}, {jet.v}) 处不正则", f"W²={W2:.3e}")
    return FirstFundamental(E=E, F=F, G=G, W2=W2, defect=defect)


def _ambient(frame: Frame4, t: float, m1: float, m2: float, m3: float) -> np.ndarray:
    return frame.to_ambient((t, m1, m2, m3))


def second_form_closed(jet: SurfaceJet) -> SecondFundamental:
    """
    闭式第二基本形式向量（含 T 分量，按推导结果原样给出）

    Raises:
        Irregular: W² ≤ 1e-14
    """
    first_form(jet)
    f, r, r1 = jet.f, jet.r, jet.r1
    k1 = float(jet.k[0])
    cv, sv = math.cos(jet.v), math.sin(jet.v)
    E = f * f + r1 * r1
    D = jet.D

    radial = f / (r * E) * (f * f - f**3 + r * D)
    huu = _ambient(
        jet.frame,
        (f * f * r1 * (f - 1.0) - r * r1 * D) / (r * E),
        f * k1,
        radial * cv,
        radial * sv,
    )
    scale_uv = jet.f_v * r1 / E
    huv = _ambient(jet.frame, scale_uv * r1, 0.0, -scale_uv * f * cv, -scale_uv * f * sv)
    scale_vv = f * r / E
    hvv = _ambient(jet.frame, scale_vv * r1, 0.0, -scale_vv * f * cv, -scale_vv * f * sv)
    return SecondFundamental(huu=huu, huv=huv, hvv=hvv)


def second_form_from_partials(
    Xu: np.ndarray,
    Xv: np.ndarray,
    Xuu: np.ndarray,
    Xuv: np.ndarray,
    Xvv: np.ndarray,
    ff: FirstFundamental,
) -> SecondFundamental:
    """由任意来源的偏导数按 F = 0 的投影公式求第二基本形式向量"""
    E, G = ff.E, ff.G
    xuv_xu = float(np.dot(Xuv, Xu))
    xuv_xv = float(np.dot(Xuv, Xv))
    huu = Xuu - float(np.dot(Xuu, Xu)) / E * Xu + xuv_xu / G * Xv
    huv = Xuv - xuv_xu / E * Xu - xuv_xv / G * Xv
    hvv = Xvv + xuv_xv / E * Xu - float(np.dot(Xvv, Xv)) / G * Xv
    return SecondFundamental(huu=huu, huv=huv, hvv=hvv)


def second_form_generic(jet: SurfaceJet, ff: Optional[FirstFundamental] = None) -> SecondFundamental:
    """
    由偏导数投影得到第二基本形式向量（要求 F = 0）

    Raises:
        NonOrthogonalPatch: |F| > 1e-8
        Irregular: W² ≤ 1e-14
    """
    ff = ff if ff is not None else first_form(jet)
    if abs(ff.F) > GENERIC_F_TOL:
        raise NonOrthogonalPatch("参数化不满足 F = 0", f"F={ff.F:.3e}")
    if ff.W2 <= REGULARITY_TOL:
        raise Irregular("曲面不正则", f"W²={ff.W2:.3e}")
    return second_form_from_partials(jet.Xu, jet.Xv, jet.Xuu, jet.Xuv, jet.Xvv, ff)


def gauss_from_forms(ff: FirstFundamental, sf: SecondFundamental) -> float:
    """K = (⟨h_uu, h_vv⟩ − ⟨h_uv, h_uv⟩) / W²"""
    return float((np.dot(sf.huu, sf.hvv) - np.dot(sf.huv, sf.huv)) / ff.W2)


def mean_from_forms(ff: FirstFundamental, sf: SecondFundamental) -> np.ndarray:
    """H⃗ = (E h_vv − 2F h_uv + G h_uu) / (2W²)"""
    return (ff.E * sf.hvv - 2.0 * ff.F * sf.huv + ff.G * sf.huu) / (2.0 * ff.W2)


# ---------------------------------------------------------------- 闭式公式


def _check_mode(jet: SurfaceJet, mode: str):
    if mode not in MODES:
        raise InvalidParameter(f"未知的曲率模式: {mode}", f"可选: {', '.join(MODES)}")
    first_form(jet)
    if mode == "tube":
        if abs(jet.r1) > MODE_TOL or abs(jet.r2) > MODE_TOL:
            raise WrongMode("tube 模式要求 r′ = r″ = 0", f"r′={jet.r1!r}, r″={jet.r2!r}")
        if abs(jet.f) <= TUBE_F_TOL:
            raise TubeSingular(f"管面公式在 (u,v)=({jet.u}, {jet.v}) 处 f = 0", f"f={jet.f:.3e}")
    elif mode == "straight":
        if np.max(np.abs(jet.k)) > MODE_TOL:
            raise WrongMode("straight 模式要求脊线为直线（k₁=k₂=k₃=0）", f"k={jet.k}")


def _general_K(f, f_v, r, r1, D) -> float:
    E = f * f + r1 * r1
    return (f**4 - f**3 - f * r * D - f_v**2 * r1**2) / (r * r * E * E)


def _general_H(f, r, r1, k1, D, cv, sv) -> Tuple[float, float, float, float]:
    E = f * f + r1 * r1
    scale = 1.0 / (2.0 * r * E * E)
    radial = -f * f * E + f**3 * (1.0 - f) + f * r * D
    return (
        scale * (f * r1 * E - r * r1 * D - f * f * r1 * (1.0 - f)),
        scale * f * r * k1 * E,
        scale * radial * cv,
        scale * radial * sv,
    )


def gauss_K(jet: SurfaceJet, mode: str = "general") -> float:
    """
    高斯曲率的闭式表达

    Args:
        jet: 曲面 jet
        mode: general 一般运河曲面；tube 管面 K = (f−1)/(fr²)；
            straight 直线脊线 K = −r″/(r(1+r′²)²)

    Raises:
        WrongMode: 曲面不符合所选模式
        Irregular: W² ≤ 1e-14
        TubeSingular: 管面模式下 f = 0
    """
    _check_mode(jet, mode)
    f, r, r1, r2 = jet.f, jet.r, jet.r1, jet.r2
    if mode == "tube":
        return (f - 1.0) / (f * r * r)
    if mode == "straight":
        return -r2 / (r * (1.0 + r1 * r1) ** 2)
    return _general_K(f, jet.f_v, r, r1, jet.D)


def mean_vector_frame(jet: SurfaceJet, mode: str = "general") -> np.ndarray:
    """平均曲率向量在 (T, M1, M2, M3) 下的分量"""
    _check_mode(jet, mode)
    f, r, r1, r2 = jet.f, jet.r, jet.r1, jet.r2
    k1 = float(jet.k[0])
    cv, sv = math.cos(jet.v), math.sin(jet.v)
    if mode == "tube":
        scale = 1.0 / (2.0 * f * r)
        return scale * np.array([0.0, r * k1, (1.0 - 2.0 * f) * cv, (1.0 - 2.0 * f) * sv])
    if mode == "straight":
        E = 1.0 + r1 * r1
        scale = (E - r * r2) / (2.0 * r * E * E)
        return scale * np.array([r1, 0.0, -cv, -sv])
    return np.array(_general_H(f, r, r1, k1, jet.D, cv, sv))


def mean_vector(jet: SurfaceJet, mode: str = "general") -> np.ndarray:
    """平均曲率向量的闭式表达（环境坐标）"""
    return jet.frame.to_ambient(mean_vector_frame(jet, mode))


def _scalar_formula(jet: SurfaceJet, mode: str) -> float:
    """标量平均曲率公式（带符号）"""
    f, r, r1, r2 = jet.f, jet.r, jet.r1, jet.r2
    k1 = float(jet.k[0])
    if mode == "tube":
        radicand = 4.0 * f * f - 4.0 * f + r * r * k1 * k1 + 1.0
        return math.sqrt(max(radicand, 0.0)) / (2.0 * f * r)
    if mode == "straight":
        return (r1 * r1 - r2 * r + 1.0) / (2.0 * r * (1.0 + r1 * r1) ** 1.5)

    E = f * f + r1 * r1
    D = jet.D
    radicand = (
        f * f * E * E
        - 2.0 * f * r * r1 * r1 * D
        - 2.0 * f**3 * E * (1.0 - f)
        + D * D * r * r
        + 2.0 * f * f * r * D
        + f**4 * (1.0 - f) ** 2
        + f * f * r * r * k1 * k1 * E
        - 4.0 * f**3 * r * D
    )
    # 舍入可能让零点附近的被开方数略小于 0
    return math.sqrt(max(radicand, 0.0)) / (2.0 * r * E**1.5)


def mean_scalar_report(jet: SurfaceJet, mode: str = "general") -> MeanScalarReport:
    """|H⃗| 与标量公式（取绝对值）的对比"""
    H = float(np.linalg.norm(mean_vector_frame(jet, mode)))
    signed = _scalar_formula(jet, mode)
    formula = abs(signed)
    gap = abs(H - formula) / max(H, formula) if max(H, formula) > 0 else 0.0
    return MeanScalarReport(H=H, formula=formula, signed_formula=signed, relative_gap=gap)


def mean_scalar(jet: SurfaceJet, mode: str = "general") -> float:
    """
    平均曲率 H = |H⃗|

    同时计算标量公式作为诊断。

    Raises:
        FormulaMismatch: 两者相对偏差超过 1e-6
    """
    report = mean_scalar_report(jet, mode)
    # 极小曲面附近被开方数只剩舍入误差，按平方比较
    h2, p2 = report.H**2, report.formula**2
    if abs(h2 - p2) > SCALAR_CHECK_RTOL * max(h2, p2) + 1e-14:
        raise FormulaMismatch(
            f"标量平均曲率公式与 |H⃗| 不一致（{mode}）",
            f"|H⃗|={report.H!r}, 公式={report.formula!r}",
        )
    return report.H


def curvature_at(
    fc: FramedCurve,
    rad: RadiusFunction,
    u: float,
    v: float,
    mode: str = "general",
    method: str = "rk4",
) -> CurvatureData:
    """
    一点处的曲率数据；不正则点标记为 regular=False 而不抛出异常
    """
    jet = surface_jet(fc, rad, u, v, method)
    E = float(np.dot(jet.Xu, jet.Xu))
    F = float(np.dot(jet.Xu, jet.Xv))
    G = float(np.dot(jet.Xv, jet.Xv))
    try:
        K = gauss_K(jet, mode)
        hframe = mean_vector_frame(jet, mode)
    except (Irregular, TubeSingular) as e:
        logger.debug(f"不正则点 (u,v)=({u}, {v}): {e}")
        nan4 = np.full(4, np.nan)
        return CurvatureData(u, v, E, F, G, jet.f, jet.g, math.nan, nan4, nan4, math.nan, False)

    return CurvatureData(
        u=float(u),
        v=float(v),
        E=E,
        F=F,
        G=G,
        f=jet.f,
        g=jet.g,
        K=float(K),
        Hvec=jet.frame.to_ambient(hframe),
        Hvec_frame=hframe,
        H=float(np.linalg.norm(hframe)),
        regular=True,
    )


def collapse_residuals(
    fc: FramedCurve,
    rad: RadiusFunction,
    us: Iterable[float],
    vs: Iterable[float],
    kind: str = "tube",
) -> CollapseReport:
    """
    特殊情形公式与一般公式在同一批点上的最大差

    Args:
        fc: 带标架的脊线
        rad: 半径函数（kind="tube" 时应为常数）
        us: u 取值
        vs: v 取值
        kind: "tube" 或 "straight"

    Returns:
        CollapseReport: K、H⃗ 与标量 H 的最大差
    """
    if kind not in ("tube", "straight"):
        raise InvalidParameter(f"未知的特殊情形: {kind}", "可选: tube, straight")
    vs = list(vs)
    max_K = max_Hvec = max_H = 0.0
    count = 0
    for u in us:
        for v in vs:
            jet = surface_jet(fc, rad, float(u), float(v))
            max_K = max(max_K, abs(gauss_K(jet, kind) - gauss_K(jet, "general")))
            special = mean_vector_frame(jet, kind)
            general = mean_vector_frame(jet, "general")
            max_Hvec = max(max_Hvec, float(np.max(np.abs(special - general))))
            gap = abs(abs(_scalar_formula(jet, kind)) - abs(_scalar_formula(jet, "general")))
            max_H = max(max_H, gap)
            count += 1
    return CollapseReport(kind=kind, max_K=max_K, max_Hvec=max_Hvec, max_H=max_H, points=count)
