"""
脊线曲线

定义脊线曲线（目录曲线与自定义采样曲线），计算位置与各阶导数（jet），
并检查/建立单位速度参数化。
"""

import logging
import math
import os
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.interpolate import CubicHermiteSpline, CubicSpline

from canal4d.exceptions import DegenerateSpeed, InvalidSpec, IoError, OutOfDomain
from canal4d.geometry.vectors import Vec4, as_vec4

logger = logging.getLogger(__name__)

CURVE_KINDS = ("torus_curve", "line", "sampled")
SAMPLED_CSV_COLUMNS = ["u", "x1", "x2", "x3", "x4"]
MIN_SAMPLES = 8
UNIT_SPEED_TOL = 1e-12
DEGENERATE_SPEED = 1e-8


@dataclass(frozen=True)
class CurveSpec:
    """曲线规格：类型、参数与定义域"""

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    domain: Optional[Tuple[float, float]] = None

    @classmethod
    def torus_curve(
        cls,
        a: float,
        b: float,
        c: float,
        d: float,
        domain: Tuple[float, float] = (0.0, 2.0 * math.pi),
    ) -> "CurveSpec":
        """γ(u) = (a cos cu, a sin cu, b cos du, b sin du)"""
        return cls("torus_curve", {"a": a, "b": b, "c": c, "d": d}, tuple(domain))

    @classmethod
    def line(
        cls,
        origin: Sequence[float],
        direction: Sequence[float],
        domain: Tuple[float, float] = (0.0, 1.0),
    ) -> "CurveSpec":
        """γ(u) = origin + u·direction"""
        return cls(
            "line",
            {"origin": tuple(origin), "direction": tuple(direction)},
            tuple(domain),
        )

    @classmethod
    def sampled(
        cls,
        u: Sequence[float],
        points: Sequence[Sequence[float]],
        domain: Optional[Tuple[float, float]] = None,
    ) -> "CurveSpec":
        """由 (u, 点) 样本给出的曲线，默认定义域为样本范围"""
        u_arr = np.asarray(u, dtype=np.float64)
        if domain is None and u_arr.size:
            domain = (float(u_arr[0]), float(u_arr[-1]))
        return cls(
            "sampled",
            {"u": tuple(u_arr), "points": tuple(map(tuple, np.asarray(points)))},
            domain,
        )


@dataclass(frozen=True, eq=False)
class CurveJet:
    """曲线在参数 u 处的位置与前三阶导数"""

    u: float
    p: Vec4
    d1: Vec4
    d2: Vec4
    d3: Vec4


@dataclass(frozen=True)
class UnitSpeedReport:
    """单位速度检查结果"""

    max_deviation: float
    argmax_u: float
    samples: int


class Curve(ABC):
    """可求值的脊线曲线"""

    # 建立标架时允许的 | |γ′| − 1 | 上限
    speed_tolerance = 1e-8

    def __init__(self, domain: Tuple[float, float]):
        lo, hi = float(domain[0]), float(domain[1])
        if not (math.isfinite(lo) and math.isfinite(hi)) or hi <= lo:
            raise InvalidSpec("定义域必须是有限区间 [u_min, u_max] 且 u_min < u_max", f"{domain}")
        self.domain = (lo, hi)

    @property
    def length(self) -> float:
        """参数区间长度"""
        return self.domain[1] - self.domain[0]

    def contains(self, u: float) -> bool:
        slack = 1e-12 * max(1.0, self.length)
        return self.domain[0] - slack <= u <= self.domain[1] + slack

    def check_domain(self, u: float):
        if not self.contains(u):
            raise OutOfDomain(
                f"参数 u={u} 超出定义域", f"[{self.domain[0]}, {self.domain[1]}]"
            )

    @abstractmethod
    def position(self, u: float) -> np.ndarray:
        """γ(u)"""

    @abstractmethod
    def tangent(self, u: float) -> np.ndarray:
        """γ′(u)"""

    @abstractmethod
    def second(self, u: float) -> np.ndarray:
        """γ″(u)"""

    @abstractmethod
    def third(self, u: float) -> np.ndarray:
        """γ‴(u)"""

    def eval_jet(self, u: float) -> CurveJet:
        """
        计算曲线在 u 处的 jet

        Raises:
            OutOfDomain: u 不在定义域内
        """
        self.check_domain(u)
        return CurveJet(
            u=float(u),
            p=as_vec4(self.position(u)),
            d1=as_vec4(self.tangent(u)),
            d2=as_vec4(self.second(u)),
            d3=as_vec4(self.third(u)),
        )

    def speed(self, u: float) -> float:
        return float(np.linalg.norm(self.tangent(u)))


class TorusCurve(Curve):
    """Clifford 环面上的曲线 γ(u) = (a cos cu, a sin cu, b cos du, b sin du)"""

    def __init__(self, a: float, b: float, c: float, d: float, domain: Tuple[float, float]):
        super().__init__(domain)
        self.a, self.b, self.c, self.d = float(a), float(b), float(c), float(d)

    def _trig(self, u: float):
        cu, du = self.c * u, self.d * u
        return math.cos(cu), math.sin(cu), math.cos(du), math.sin(du)

    def position(self, u):
        cc, sc, cd, sd = self._trig(u)
        a, b = self.a, self.b
        return np.array([a * cc, a * sc, b * cd, b * sd])

    def tangent(self, u):
        cc, sc, cd, sd = self._trig(u)
        ac, bd = self.a * self.c, self.b * self.d
        return np.array([-ac * sc, ac * cc, -bd * sd, bd * cd])

    def second(self, u):
        cc, sc, cd, sd = self._trig(u)
        ac2, bd2 = self.a * self.c**2, self.b * self.d**2
        return np.array([-ac2 * cc, -ac2 * sc, -bd2 * cd, -bd2 * sd])

    def third(self, u):
        cc, sc, cd, sd = self._trig(u)
        ac3, bd3 = self.a * self.c**3, self.b * self.d**3
        return np.array([ac3 * sc, -ac3 * cc, bd3 * sd, -bd3 * cd])

    def curvature(self) -> float:
        """κ = |γ″| = √(a²c⁴ + b²d⁴)，对所有 u 为常数"""
        return math.sqrt(self.a**2 * self.c**4 + self.b**2 * self.d**4)


class LineCurve(Curve):
    """直线 γ(u) = origin + u·direction"""

    def __init__(self, origin: Sequence[float], direction: Sequence[float], domain):
        super().__init__(domain)
        self.origin = as_vec4(origin)
        self.direction = as_vec4(direction)

    def position(self, u):
        return self.origin + u * self.direction

    def tangent(self, u):
        return np.array(self.direction)

    def second(self, u):
        return np.zeros(4)

    def third(self, u):
        return np.zeros(4)


class SampledCurve(Curve):
    """由样本插值的曲线（not-a-knot 三次样条，C²）"""

    speed_tolerance = 1e-5

    def __init__(self, u: Sequence[float], points: Sequence[Sequence[float]], domain=None):
        u_arr = np.asarray(u, dtype=np.float64)
        pts = np.asarray(points, dtype=np.float64)
        if domain is None:
            domain = (float(u_arr[0]), float(u_arr[-1]))
        super().__init__(domain)
        self.u_samples = u_arr
        self.samples = pts
        self._spline = CubicSpline(u_arr, pts, axis=0, bc_type="not-a-knot")
        self._d1 = self._spline.derivative(1)
        self._d2 = self._spline.derivative(2)
        # 三阶导数用二阶导数的中心差分，步长随定义域长度缩放
        self.fd_step = 1e-4 * self.length

    def position(self, u):
        return np.asarray(self._spline(u))

    def tangent(self, u):
        return np.asarray(self._d1(u))

    def second(self, u):
        return np.asarray(self._d2(u))

    def third(self, u):
        h = self.fd_step
        return (np.asarray(self._d2(u + h)) - np.asarray(self._d2(u - h))) / (2.0 * h)


def _validate_domain(spec: CurveSpec) -> Tuple[float, float]:
    if spec.domain is None or len(spec.domain) != 2:
        raise InvalidSpec("曲线缺少定义域 domain=[u_min, u_max]", spec.kind)
    return float(spec.domain[0]), float(spec.domain[1])


def make_curve(spec: CurveSpec, strict: bool = True) -> Curve:
    """
    由规格构造曲线对象

    Args:
        spec: 曲线规格
        strict: 是否检查单位速度条件（torus 的 a²c²+b²d²=1、直线方向为单位向量）；
            关闭后可用于构造需要弧长重参数化的曲线

    Returns:
        Curve: 可求值的曲线

    Raises:
        InvalidSpec: 违反的不变量写在错误信息中
    """
    kind = spec.kind
    params = spec.params
    if kind not in CURVE_KINDS:
        raise InvalidSpec(f"未知的曲线类型: {kind}", f"可选: {', '.join(CURVE_KINDS)}")

    try:
        if kind == "torus_curve":
            a, b = float(params["a"]), float(params["b"])
            c, d = float(params["c"]), float(params["d"])
            if c <= 0 or d <= 0:
                raise InvalidSpec("torus_curve 需要 c>0 且 d>0", f"c={c}, d={d}")
            speed_sq = a * a * c * c + b * b * d * d
            if strict and abs(speed_sq - 1.0) > UNIT_SPEED_TOL:
                raise InvalidSpec(
                    "torus_curve 不满足单位速度条件 a²c²+b²d²=1",
                    f"a²c²+b²d²={speed_sq!r}",
                )
            return TorusCurve(a, b, c, d, _validate_domain(spec))

        if kind == "line":
            origin = as_vec4(params["origin"])
            direction = as_vec4(params["direction"])
            length = float(np.linalg.norm(direction))
            if strict and abs(length - 1.0) > UNIT_SPEED_TOL:
                raise InvalidSpec("直线方向向量必须为单位向量 |direction|=1", f"|direction|={length!r}")
            return LineCurve(origin, direction, _validate_domain(spec))

        u = np.asarray(params["u"], dtype=np.float64)
        points = np.asarray(params["points"], dtype=np.float64)
    except KeyError as e:
        raise InvalidSpec(f"曲线 {kind} 缺少参数: {e.args[0]}")

    if u.ndim != 1 or points.shape != (u.size, 4):
        raise InvalidSpec("采样曲线需要 N 个参数与 N×4 个点", f"u={u.shape}, points={points.shape}")
    if u.size < MIN_SAMPLES:
        raise InvalidSpec(f"采样曲线至少需要 {MIN_SAMPLES} 个点", f"实际 {u.size} 个")
    if not np.all(np.diff(u) > 0):
        raise InvalidSpec("采样曲线的参数 u 必须严格递增")
    if not np.all(np.isfinite(points)):
        raise InvalidSpec("采样点必须有限")
    if spec.domain is None:
        return SampledCurve(u, points, (float(u[0]), float(u[-1])))
    lo, hi = _validate_domain(spec)
    if lo < u[0] or hi > u[-1]:
        raise OutOfDomain(
            "采样曲线的定义域必须落在样本范围之内",
            f"domain=[{lo!r}, {hi!r}]，样本范围 [{u[0]!r}, {u[-1]!r}]",
        )
    return SampledCurve(u, points, (lo, hi))


def eval_jet(curve: Curve, u: float) -> CurveJet:
    """计算曲线在 u 处的 jet（参见 Curve.eval_jet）"""
    return curve.eval_jet(u)


def unit_speed_check(curve: Curve, n: int) -> UnitSpeedReport:
    """
    在 n 个等距参数上检查 | |γ′| − 1 | 的最大值

    Args:
        curve: 曲线
        n: 采样数（≥ 2）

    Returns:
        UnitSpeedReport: 最大偏差及其位置
    """
    if n < 2:
        raise InvalidSpec("unit_speed_check 需要 n ≥ 2", f"n={n}")
    us = np.linspace(curve.domain[0], curve.domain[1], n)
    deviations = np.array([abs(curve.speed(u) - 1.0) for u in us])
    idx = int(np.argmax(deviations))
    return UnitSpeedReport(float(deviations[idx]), float(us[idx]), n)


def arclength_reparam(curve: Curve, n: int = 1024) -> SampledCurve:
    """
    按弧长重新参数化

    累积弧长在 n 个子区间上用复合 Simpson 公式求得；u(s) 用以 du/ds = 1/|γ′|
    为节点导数的三次 Hermite 插值反解，然后在等距弧长网格上重新采样。

    Args:
        curve: 任意正则曲线
        n: 子区间数

    Returns:
        SampledCurve: 参数为弧长 s ∈ [0, L] 的采样曲线

    Raises:
        DegenerateSpeed: 某个采样点 |γ′| < 1e-8
    """
    if n < MIN_SAMPLES:
        raise InvalidSpec(f"arclength_reparam 需要 n ≥ {MIN_SAMPLES}", f"n={n}")

    u_nodes = np.linspace(curve.domain[0], curve.domain[1], n + 1)
    du = u_nodes[1] - u_nodes[0]
    speeds = np.array([curve.speed(u) for u in u_nodes])
    mid_speeds = np.array([curve.speed(u + 0.5 * du) for u in u_nodes[:-1]])

    slowest = float(min(speeds.min(), mid_speeds.min()))
    if slowest < DEGENERATE_SPEED:
        bad = float(u_nodes[int(np.argmin(speeds))])
        raise DegenerateSpeed("曲线存在驻点，无法按弧长参数化", f"|γ′|={slowest:.3e} 近 u={bad}")

    pieces = du / 6.0 * (speeds[:-1] + 4.0 * mid_speeds + speeds[1:])
    s_nodes = np.concatenate([[0.0], np.cumsum(pieces)])
    total = float(s_nodes[-1])

    inverse = CubicHermiteSpline(s_nodes, u_nodes, 1.0 / speeds)
    s_grid = np.linspace(0.0, total, n + 1)
    u_of_s = np.clip(inverse(s_grid), curve.domain[0], curve.domain[1])
    points = np.array([curve.position(u) for u in u_of_s])

    logger.debug(f"弧长重参数化完成：L={total:.6f}, 子区间={n}")
    return SampledCurve(s_grid, points, (0.0, total))


def read_sampled_csv(path: str, domain: Optional[Tuple[float, float]] = None) -> CurveSpec:
    """
    读取采样曲线 CSV（表头 u,x1,x2,x3,x4）

    Args:
        path: CSV 文件路径
        domain: 可选定义域，默认取样本范围

    Returns:
        CurveSpec: sampled 类型的曲线规格
    """
    if not os.path.isfile(path):
        raise IoError("采样曲线文件不存在", path)
    try:
        df = pd.read_csv(path)
    except Exception as e:
        raise IoError("无法读取采样曲线 CSV", f"{path}: {e}")

    missing = [c for c in SAMPLED_CSV_COLUMNS if c not in df.columns]
    if missing:
        raise InvalidSpec("采样曲线 CSV 缺少列", ", ".join(missing))

    logger.info(f"读取采样曲线：{path}，共 {len(df)} 个样本")
    return CurveSpec.sampled(
        df["u"].to_numpy(dtype=np.float64),
        df[["x1", "x2", "x3", "x4"]].to_numpy(dtype=np.float64),
        domain,
    )
