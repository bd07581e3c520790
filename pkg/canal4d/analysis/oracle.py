"""
有限差分曲率 oracle

只依赖曲面点采样函数 (u, v) -> 四维点：所有偏导数由中心差分得到，
第二基本形式、K 与 H⃗ 由通用投影公式组装，与闭式公式完全独立。
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from canal4d.exceptions import InvalidParameter, Irregular, NonOrthogonalPatch, OutOfDomain
from canal4d.geometry.canal import (
    FirstFundamental,
    REGULARITY_TOL,
    gauss_from_forms,
    mean_from_forms,
    second_form_from_partials,
)

logger = logging.getLogger(__name__)

Sampler = Callable[[float, float], np.ndarray]

ORACLE_F_TOL = 1e-6

# 中心差分权重：偏移 -> 系数
_FIRST = {
    2: {-1: -0.5, 1: 0.5},
    4: {-2: 1.0 / 12.0, -1: -8.0 / 12.0, 1: 8.0 / 12.0, 2: -1.0 / 12.0},
}
_SECOND = {
    2: {-1: 1.0, 0: -2.0, 1: 1.0},
    4: {-2: -1.0 / 12.0, -1: 16.0 / 12.0, 0: -30.0 / 12.0, 1: 16.0 / 12.0, 2: -1.0 / 12.0},
}


@dataclass(frozen=True)
class OracleConfig:
    """有限差分步长与模板阶数"""

    h_u: float = 1e-4
    h_v: float = 1e-4
    order: int = 2

    def __post_init__(self):
        for name in ("h_u", "h_v"):
            step = getattr(self, name)
            if not 0 < step < 1e-2:
                raise InvalidParameter(f"oracle 步长 {name} 必须在 (0, 1e-2) 内", f"{name}={step}")
        if self.order not in (2, 4):
            raise InvalidParameter("oracle 模板阶数只能是 2 或 4", f"order={self.order}")

    @classmethod
    def uniform(cls, h: float, order: int = 2) -> "OracleConfig":
        return cls(h_u=h, h_v=h, order=order)

    @property
    def reach(self) -> int:
        """模板在每个方向上的最大偏移步数"""
        return self.order // 2


@dataclass(frozen=True, eq=False)
class OracleResult:
    """oracle 给出的曲率"""

    K: float
    Hvec: np.ndarray
    E: float
    F: float
    G: float

    @property
    def H(self) -> float:
        return float(np.linalg.norm(self.Hvec))


def _partials(sampler: Sampler, u: float, v: float, cfg: OracleConfig):
    cache: Dict[Tuple[int, int], np.ndarray] = {}

    def at(i: int, j: int) -> np.ndarray:
        if (i, j) not in cache:
            cache[(i, j)] = np.asarray(sampler(u + i * cfg.h_u, v + j * cfg.h_v), dtype=np.float64)
        return cache[(i, j)]

    first, second = _FIRST[cfg.order], _SECOND[cfg.order]
    hu, hv = cfg.h_u, cfg.h_v
    Xu = sum(w * at(i, 0) for i, w in first.items()) / hu
    Xv = sum(w * at(0, j) for j, w in first.items()) / hv
    Xuu = sum(w * at(i, 0) for i, w in second.items()) / (hu * hu)
    Xvv = sum(w * at(0, j) for j, w in second.items()) / (hv * hv)
    # 混合导数：两个方向一阶模板的张量积
    Xuv = sum(
        wi * wj * at(i, j) for i, wi in first.items() for j, wj in first.items()
    ) / (hu * hv)
    return Xu, Xv, Xuu, Xuv, Xvv


def oracle_curvature(
    sampler: Sampler,
    u: float,
    v: float,
    cfg: Optional[OracleConfig] = None,
    u_range: Optional[Tuple[float, float]] = None,
) -> OracleResult:
    """
    用中心差分计算 K 与 H⃗

    Args:
        sampler: 曲面点采样函数
        u: 参数 u
        v: 参数 v
        cfg: 差分配置，默认二阶模板、步长 1e-4
        u_range: 采样函数允许的 u 范围；给出时要求 u 距端点至少两个步长

    Returns:
        OracleResult: K、H⃗ 与第一基本形式

    Raises:
        NonOrthogonalPatch: 差分得到的 |F| > 1e-6
        Irregular: W² ≤ 1e-14
    """
    cfg = cfg or OracleConfig()
    if u_range is not None:
        margin = 2 * max(cfg.reach, 1) * cfg.h_u
        if u - u_range[0] < margin or u_range[1] - u < margin:
            raise OutOfDomain("oracle 需要 u 距端点至少两个步长", f"u={u}, 范围={u_range}")

    Xu, Xv, Xuu, Xuv, Xvv = _partials(sampler, u, v, cfg)
    E = float(np.dot(Xu, Xu))
    F = float(np.dot(Xu, Xv))
    G = float(np.dot(Xv, Xv))
    W2 = E * G - F * F
    if abs(F) > ORACLE_F_TOL:
        raise NonOrthogonalPatch("差分得到的参数化不满足 F = 0", f"F={F:.3e} @ ({u}, {v})")
    if W2 <= REGULARITY_TOL:
        raise Irregular(f"曲面在 (u,v)=({u}, {v}) 处不正则", f"W²={W2:.3e}")

    ff = FirstFundamental(E=E, F=F, G=G, W2=W2)
    sf = second_form_from_partials(Xu, Xv, Xuu, Xuv, Xvv, ff)
    return OracleResult(K=gauss_from_forms(ff, sf), Hvec=mean_from_forms(ff, sf), E=E, F=F, G=G)


def oracle_convergence_ratio(
    sampler: Sampler,
    u: float,
    v: float,
    reference_K: float,
    h: float,
    order: int = 2,
) -> float:
    """
    步长减半时 |K_oracle − K_ref| 的缩小比例（二阶模板约为 4）
    """
    coarse = abs(oracle_curvature(sampler, u, v, OracleConfig.uniform(h, order)).K - reference_K)
    fine = abs(oracle_curvature(sampler, u, v, OracleConfig.uniform(h / 2.0, order)).K - reference_K)
    logger.info(f"oracle 收敛：h={h} 误差 {coarse:.3e}，h/2 误差 {fine:.3e}")
    return coarse / fine
