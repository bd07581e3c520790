"""
半径函数

管道/运河曲面的半径 r(u) 及其一、二阶导数。
"""

import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Tuple

import numpy as np
import pandas as pd
from scipy.interpolate import CubicSpline

from canal4d.exceptions import InvalidSpec, IoError, NonpositiveRadius

logger = logging.getLogger(__name__)

RADIUS_KINDS = (
    "constant",
    "linear",
    "quadratic",
    "cos_sq",
    "cosh_scaled",
    "sine",
    "sampled",
)

LINEAR_TOL = 1e-9

_REQUIRED = {
    "constant": ("r0",),
    "linear": ("a", "b"),
    "quadratic": (),
    "cos_sq": (),
    "cosh_scaled": ("c1", "C"),
    "sine": ("mean", "amp"),
    "sampled": ("u", "r"),
}


@dataclass(frozen=True)
class RadiusFunction:
    """
    半径函数 r(u)

    Attributes:
        kind: 类型，见 RADIUS_KINDS
        params: 该类型的参数
    """

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    _spline: Any = field(default=None, init=False, repr=False, compare=False)

    def __post_init__(self):
        if self.kind not in RADIUS_KINDS:
            raise InvalidSpec(f"未知的半径类型: {self.kind}", f"可选: {', '.join(RADIUS_KINDS)}")
        missing = [key for key in _REQUIRED[self.kind] if key not in self.params]
        if missing:
            raise InvalidSpec(f"半径 {self.kind} 缺少参数", ", ".join(missing))
        if self.kind == "cosh_scaled" and not float(self.params["c1"]) > 0:
            raise InvalidSpec("cosh_scaled 需要 c1 > 0", f"c1={self.params['c1']}")
        if self.kind == "sampled":
            u = np.asarray(self.params["u"], dtype=np.float64)
            r = np.asarray(self.params["r"], dtype=np.float64)
            if u.ndim != 1 or r.shape != u.shape or u.size < 4:
                raise InvalidSpec("采样半径需要至少 4 个 (u, r) 样本")
            if not np.all(np.diff(u) > 0):
                raise InvalidSpec("采样半径的 u 必须严格递增")
            object.__setattr__(self, "_spline", CubicSpline(u, r, bc_type="not-a-knot"))

    # ------------------------------------------------------------ 目录

    @classmethod
    def constant(cls, r0: float) -> "RadiusFunction":
        """r = r₀（管面）"""
        return cls("constant", {"r0": float(r0)})

    @classmethod
    def linear(cls, a: float, b: float) -> "RadiusFunction":
        """r = au + b"""
        return cls("linear", {"a": float(a), "b": float(b)})

    @classmethod
    def quadratic(cls, a: float = 1.0, b: float = 0.0, c: float = 0.0) -> "RadiusFunction":
        """r = au² + bu + c，默认即 r = u²"""
        return cls("quadratic", {"a": float(a), "b": float(b), "c": float(c)})

    @classmethod
    def cos_sq(cls) -> "RadiusFunction":
        """r = cos(u²)"""
        return cls("cos_sq", {})

    @classmethod
    def cosh_scaled(cls, c1: float, C: float) -> "RadiusFunction":
        """r = c₁·cosh(u/c₁ + C)"""
        return cls("cosh_scaled", {"c1": float(c1), "C": float(C)})

    @classmethod
    def sine(
        cls, mean: float, amp: float, freq: float = 1.0, phase: float = 0.0
    ) -> "RadiusFunction":
        """r = mean + amp·sin(freq·u + phase)"""
        return cls(
            "sine",
            {"mean": float(mean), "amp": float(amp), "freq": float(freq), "phase": float(phase)},
        )

    @classmethod
    def sampled(cls, u: Iterable[float], r: Iterable[float]) -> "RadiusFunction":
        """由样本插值（not-a-knot 三次样条）"""
        return cls("sampled", {"u": tuple(map(float, u)), "r": tuple(map(float, r))})

    # ------------------------------------------------------------ 求值

    @property
    def is_constant(self) -> bool:
        """r′ 与 r″ 是否恒为零"""
        p = self.params
        if self.kind == "constant":
            return True
        if self.kind == "linear":
            return float(p["a"]) == 0.0
        if self.kind == "quadratic":
            return float(p.get("a", 1.0)) == 0.0 and float(p.get("b", 0.0)) == 0.0
        if self.kind == "sine":
            return float(p["amp"]) == 0.0 or float(p.get("freq", 1.0)) == 0.0
        return False

    @property
    def is_linear(self) -> bool:
        """r″ 是否恒为零（常数与一次函数）"""
        p = self.params
        if self.kind in ("constant", "linear"):
            return True
        if self.kind == "quadratic":
            return float(p.get("a", 1.0)) == 0.0
        if self.kind == "sampled":
            # 三次样条的 r″ 分段线性，检查节点即可
            knots = np.asarray(p["u"])
            scale = max(1.0, float(np.max(np.abs(p["r"]))))
            return bool(np.max(np.abs(self._spline(knots, 2))) <= LINEAR_TOL * scale)
        return self.is_constant

    def evaluate(self, u: float) -> Tuple[float, float, float]:
        """
        计算 (r, r′, r″)

        Args:
            u: 参数

        Returns:
            Tuple[float, float, float]: 半径及其一、二阶导数
        """
        p = self.params
        kind = self.kind
        if kind == "constant":
            return float(p["r0"]), 0.0, 0.0
        if kind == "linear":
            a, b = float(p["a"]), float(p["b"])
            return a * u + b, a, 0.0
        if kind == "quadratic":
            a, b, c = float(p.get("a", 1.0)), float(p.get("b", 0.0)), float(p.get("c", 0.0))
            return a * u * u + b * u + c, 2.0 * a * u + b, 2.0 * a
        if kind == "cos_sq":
            s = u * u
            return math.cos(s), -2.0 * u * math.sin(s), -2.0 * math.sin(s) - 4.0 * s * math.cos(s)
        if kind == "cosh_scaled":
            c1, C = float(p["c1"]), float(p["C"])
            t = u / c1 + C
            return c1 * math.cosh(t), math.sinh(t), math.cosh(t) / c1
        if kind == "sine":
            mean, amp = float(p["mean"]), float(p["amp"])
            freq, phase = float(p.get("freq", 1.0)), float(p.get("phase", 0.0))
            t = freq * u + phase
            return (
                mean + amp * math.sin(t),
                amp * freq * math.cos(t),
                -amp * freq * freq * math.sin(t),
            )
        spline = self._spline
        return float(spline(u)), float(spline(u, 1)), float(spline(u, 2))

    def __call__(self, u: float) -> float:
        return self.evaluate(u)[0]

    def check_positive(self, us: Iterable[float]):
        """
        检查给定参数处 r > 0

        Raises:
            NonpositiveRadius: 第一个 r ≤ 0 的参数记录在 u 属性中
        """
        for u in us:
            r = self.evaluate(float(u))[0]
            if not r > 0:
                raise NonpositiveRadius(
                    f"半径在 u={float(u)} 处非正", f"{self.describe()}: r={r!r}", u=float(u)
                )

    def describe(self) -> str:
        """用于日志与清单文件的简短描述"""
        p = self.params
        kind = self.kind
        if kind == "constant":
            return f"r={p['r0']:g}"
        if kind == "linear":
            return f"r={p['a']:g}u+{p['b']:g}"
        if kind == "quadratic":
            return f"r={p.get('a', 1.0):g}u²+{p.get('b', 0.0):g}u+{p.get('c', 0.0):g}"
        if kind == "cos_sq":
            return "r=cos(u²)"
        if kind == "cosh_scaled":
            return f"r={p['c1']:g}·cosh(u/{p['c1']:g}+{p['C']:g})"
        if kind == "sine":
            return (
                f"r={p['mean']:g}+{p['amp']:g}·sin({p.get('freq', 1.0):g}u"
                f"+{p.get('phase', 0.0):g})"
            )
        return f"r=sampled({len(p['u'])})"

    def to_dict(self) -> Dict[str, Any]:
        data = {"kind": self.kind}
        data.update({k: list(v) if isinstance(v, tuple) else v for k, v in self.params.items()})
        return data


def read_radius_csv(path: str) -> RadiusFunction:
    """
    读取采样半径 CSV（表头 u,r）

    Args:
        path: CSV 文件路径

    Returns:
        RadiusFunction: sampled 类型的半径函数
    """
    if not os.path.isfile(path):
        raise IoError("采样半径文件不存在", path)
    try:
        df = pd.read_csv(path)
    except Exception as e:
        raise IoError("无法读取采样半径 CSV", f"{path}: {e}")
    if "u" not in df.columns or "r" not in df.columns:
        raise InvalidSpec("采样半径 CSV 需要列 u,r", path)
    logger.info(f"读取采样半径：{path}，共 {len(df)} 个样本")
    return RadiusFunction.sampled(df["u"].to_numpy(), df["r"].to_numpy())
