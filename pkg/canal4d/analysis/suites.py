"""
检验套件

把 theorems 中的各项检验组织成 check 命令的套件，每项结果输出为
{check, params, max_residual, tolerance, pass}。
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from canal4d.analysis.oracle import OracleConfig
from canal4d.analysis.theorems import (
    FLAT_TOL,
    MinimalRadiusParams,
    equivalence_check,
    flatness_check,
    is_straight,
    linear_weingarten_cert,
    minimal_relation_residual,
    verify_minimal,
    weingarten_check,
)
from canal4d.exceptions import InvalidParameter, Irregular, TubeSingular, WrongMode
from canal4d.geometry.canal import collapse_residuals
from canal4d.geometry.frames import FramedCurve
from canal4d.geometry.radius import RadiusFunction
from canal4d.meshio.sampling import GridSpec, sample_patch

logger = logging.getLogger(__name__)

COLLAPSE_TOL = 1e-12
V_DERIVATIVE_TOL = 1e-10
MINIMAL_CLOSED_TOL = 1e-10
MINIMAL_ORACLE_TOL = 1e-5
MINIMAL_RELATION_TOL = 1e-10
LINEAR_WEINGARTEN_TOL = 1e-12


def _json_number(value: Optional[float]) -> Optional[float]:
    """JSON 中不能出现 NaN 与 Inf，非有限值写为 null"""
    if value is None or not math.isfinite(value):
        return None
    return float(value)


@dataclass(frozen=True)
class CheckResult:
    """一项检验的结果；tolerance 与 passed 为 None 表示仅供参考"""

    check: str
    max_residual: Optional[float]
    tolerance: Optional[float] = None
    passed: Optional[bool] = None
    params: Dict[str, Any] = field(default_factory=dict)

    @classmethod
    def against(cls, check: str, residual: float, tolerance: float, **params) -> "CheckResult":
        residual = float(residual)
        passed = bool(math.isfinite(residual) and residual <= tolerance)
        return cls(check, residual, tolerance, passed, params)

    @property
    def failed(self) -> bool:
        return self.passed is False

    def to_dict(self) -> Dict[str, Any]:
        return {
            "check": self.check,
            "params": self.params,
            "max_residual": _json_number(self.max_residual),
            "tolerance": self.tolerance,
            "pass": self.passed,
        }


@dataclass(frozen=True)
class SuiteContext:
    """运行套件所需的全部对象"""

    fc: FramedCurve
    rad: RadiusFunction
    grid: GridSpec
    oracle: OracleConfig = field(default_factory=OracleConfig)
    k: float = 1.0
    weingarten_tol: float = 1e-8
    oracle_tol: float = 1e-5
    minimal_params: Optional[MinimalRadiusParams] = None
    workers: int = 1

    @property
    def grid_params(self) -> Dict[str, Any]:
        return {"nu": self.grid.nu, "nv": self.grid.nv, "u_range": list(self.grid.u_range)}


def _require_straight(ctx: SuiteContext, suite: str):
    if not is_straight(ctx.fc):
        raise WrongMode(f"{suite} 套件需要直线脊线", f"max|k|={float(np.max(np.abs(ctx.fc.k))):.3e}")


def _collapse(ctx: SuiteContext, kind: str) -> CheckResult:
    try:
        report = collapse_residuals(ctx.fc, ctx.rad, ctx.grid.us, ctx.grid.vs, kind)
    except (Irregular, TubeSingular) as e:
        logger.warning(f"特殊情形比较（{kind}）遇到不正则点: {e}")
        return CheckResult(
            f"collapse.{kind}", None, COLLAPSE_TOL, False, {"error": f"{type(e).__name__}: {e}"}
        )
    return CheckResult.against(
        f"collapse.{kind}",
        report.max_residual,
        COLLAPSE_TOL,
        points=report.points,
        max_K=report.max_K,
        max_Hvec=report.max_Hvec,
        max_H=report.max_H,
    )


def run_equivalence(ctx: SuiteContext) -> List[CheckResult]:
    """闭式 K、H⃗ 与 oracle 的比较；常数半径或直线脊线时附加特殊情形比较"""
    report = equivalence_check(ctx.fc, ctx.rad, ctx.grid, ctx.oracle)
    params = {
        **ctx.grid_params,
        "points": report.points,
        "skipped": report.skipped,
        "h_u": ctx.oracle.h_u,
        "h_v": ctx.oracle.h_v,
        "order": ctx.oracle.order,
    }
    results = [
        CheckResult.against("equivalence.K", report.max_K_error, ctx.oracle_tol, **params),
        CheckResult.against("equivalence.Hvec", report.max_Hvec_error, ctx.oracle_tol, **params),
    ]
    if ctx.rad.is_constant:
        results.append(_collapse(ctx, "tube"))
    if is_straight(ctx.fc):
        results.append(_collapse(ctx, "straight"))
    return results


def run_weingarten(ctx: SuiteContext) -> List[CheckResult]:
    """K_uH_v − K_vH_u 与 K_v、H_v；一般脊线上结果仅供参考"""
    sample = sample_patch(ctx.fc, ctx.rad, ctx.grid, with_curvature=True, workers=ctx.workers)
    report = weingarten_check(sample.K, sample.H, ctx.grid.du, ctx.grid.dv, ctx.weingarten_tol)
    params = {**ctx.grid_params, "irregular": sample.irregular_count}
    v_max = max(report.max_Kv, report.max_Hv)

    if not is_straight(ctx.fc):
        logger.info(f"一般脊线上的 Weingarten Jacobian（仅供参考）: {report.max_jacobian:.3e}")
        return [
            CheckResult("weingarten.jacobian", report.max_jacobian, params=params),
            CheckResult("weingarten.v_derivatives", v_max, params=params),
        ]
    return [
        CheckResult.against("weingarten.jacobian", report.max_jacobian, ctx.weingarten_tol, **params),
        CheckResult.against("weingarten.v_derivatives", v_max, V_DERIVATIVE_TOL, **params),
    ]


def run_flat(ctx: SuiteContext) -> List[CheckResult]:
    """平坦性：is_flat 应当与半径是否为一次函数一致"""
    _require_straight(ctx, "flat")
    report = flatness_check(ctx.fc, ctx.rad, ctx.grid)
    expected = ctx.rad.is_linear
    params = {**ctx.grid_params, "radius": ctx.rad.describe(), "is_flat": report.is_flat, "expected_flat": expected}
    return [CheckResult("flat", report.max_abs_K, FLAT_TOL, report.is_flat == expected, params)]


def run_minimal(ctx: SuiteContext) -> List[CheckResult]:
    """极小性：闭式与 oracle 两条路径的 max |H|，以及主分支上的隐式关系"""
    _require_straight(ctx, "minimal")
    params = {**ctx.grid_params, "radius": ctx.rad.describe()}
    results = [
        CheckResult.against(
            "minimal.closed", verify_minimal(ctx.fc, ctx.rad, ctx.grid, "closed"), MINIMAL_CLOSED_TOL, **params
        ),
        CheckResult.against(
            "minimal.oracle",
            verify_minimal(ctx.fc, ctx.rad, ctx.grid, "oracle", ctx.oracle),
            MINIMAL_ORACLE_TOL,
            **params,
        ),
    ]

    mp = ctx.minimal_params
    if mp is not None:
        principal = [float(u) for u in ctx.grid.us if u / mp.c1 + mp.C >= 0]
        residual = max((abs(minimal_relation_residual(mp, u)) for u in principal), default=0.0)
        results.append(
            CheckResult.against(
                "minimal.relation",
                residual,
                MINIMAL_RELATION_TOL,
                c1=mp.c1,
                c2=mp.c2,
                principal_points=len(principal),
            )
        )
    return results


def run_linear_weingarten(ctx: SuiteContext) -> List[CheckResult]:
    cert = linear_weingarten_cert(ctx.fc, ctx.rad, ctx.k, ctx.grid)
    return [
        CheckResult.against(
            "linear_weingarten",
            cert.residual,
            LINEAR_WEINGARTEN_TOL,
            a=cert.a,
            b=cert.b,
            c=cert.c,
            k=ctx.k,
            **ctx.grid_params,
        )
    ]


SUITES: Dict[str, Callable[[SuiteContext], List[CheckResult]]] = {
    "equivalence": run_equivalence,
    "weingarten": run_weingarten,
    "flat": run_flat,
    "minimal": run_minimal,
    "linear-weingarten": run_linear_weingarten,
}


def run_suite(name: str, ctx: SuiteContext) -> List[CheckResult]:
    """
    运行指定套件

    Args:
        name: 套件名，见 SUITES
        ctx: 运行对象

    Returns:
        List[CheckResult]: 各项检验结果

    Raises:
        InvalidParameter: 未知套件
    """
    runner = SUITES.get(name)
    if runner is None:
        raise InvalidParameter(f"未知的检验套件: {name}", f"可选: {', '.join(SUITES)}")
    logger.info(f"开始运行检验套件: {name}")
    results = runner(ctx)
    failed = [r.check for r in results if r.failed]
    if failed:
        logger.warning(f"套件 {name} 中未通过的检验: {', '.join(failed)}")
    else:
        logger.info(f"套件 {name} 完成，共 {len(results)} 项")
    return results
