"""
运行配置

一次运行由一个 JSON 文档描述：脊线、半径、标架积分、网格、oracle 与检验参数。
JSON 解析为不可变的数据类，缺少必填项或类型错误时抛出 ConfigError。
"""

import json
import logging
import math
import os
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, Optional, Tuple

from canal4d.analysis.oracle import OracleConfig
from canal4d.analysis.theorems import MinimalRadiusParams, minimal_radius
from canal4d.exceptions import CanalGeometryError, ConfigError
from canal4d.geometry.curves import (
    Curve,
    CurveSpec,
    arclength_reparam,
    make_curve,
    read_sampled_csv,
)
from canal4d.geometry.frames import FramedCurve, frame_curve, rotation_in_plane
from canal4d.geometry.radius import RadiusFunction, read_radius_csv
from canal4d.meshio.sampling import GridSpec

logger = logging.getLogger(__name__)


def _section(data: Dict[str, Any], key: str, required: bool = True) -> Dict[str, Any]:
    value = data.get(key)
    if value is None:
        if required:
            raise ConfigError(f"配置缺少 {key} 段")
        return {}
    if not isinstance(value, dict):
        raise ConfigError(f"配置项 {key} 必须是对象", f"实际类型 {type(value).__name__}")
    return value


def _number(data: Dict[str, Any], key: str, section: str, default: Any = None) -> float:
    if key not in data:
        if default is None:
            raise ConfigError(f"配置缺少 {section}.{key}")
        return default
    value = data[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"配置项 {section}.{key} 必须是数值", f"实际值 {value!r}")
    return float(value)


def _integer(data: Dict[str, Any], key: str, section: str) -> int:
    value = data.get(key)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"配置项 {section}.{key} 必须是整数", f"实际值 {value!r}")
    return value


def _interval(value: Any, name: str) -> Tuple[float, float]:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in value)
    ):
        raise ConfigError(f"配置项 {name} 必须是 [a, b] 形式的区间", f"实际值 {value!r}")
    return float(value[0]), float(value[1])


def _resolve(path: str, base_dir: str) -> str:
    if os.path.isabs(path) or not base_dir:
        return path
    return os.path.join(base_dir, path)


@dataclass(frozen=True)
class CurveConfig:
    """脊线配置：{kind, 参数…, domain: [a, b]}"""

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    domain: Optional[Tuple[float, float]] = None
    path: str = ""
    reparametrize: bool = False

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: str = "") -> "CurveConfig":
        kind = data.get("kind")
        if not isinstance(kind, str):
            raise ConfigError("配置缺少 curve.kind")
        domain = _interval(data["domain"], "curve.domain") if "domain" in data else None
        params = {k: v for k, v in data.items() if k not in ("kind", "domain", "path", "reparametrize")}
        path = _resolve(data["path"], base_dir) if "path" in data else ""

        if kind == "torus_curve":
            for key in ("a", "b", "c", "d"):
                params[key] = _number(data, key, "curve")
            domain = domain or (0.0, 2.0 * math.pi)
        elif kind == "line":
            for key in ("origin", "direction"):
                if key not in data:
                    raise ConfigError(f"配置缺少 curve.{key}")
            if domain is None:
                raise ConfigError("直线脊线需要 curve.domain")
        elif kind == "sampled":
            if not path:
                raise ConfigError("采样脊线需要 curve.path（CSV 文件）")
        else:
            raise ConfigError(f"未知的脊线类型: {kind}", "可选: torus_curve, line, sampled")

        return cls(
            kind=kind,
            params=params,
            domain=domain,
            path=path,
            reparametrize=bool(data.get("reparametrize", False)),
        )

    def to_spec(self) -> CurveSpec:
        if self.kind == "torus_curve":
            p = self.params
            return CurveSpec.torus_curve(p["a"], p["b"], p["c"], p["d"], self.domain)
        if self.kind == "line":
            return CurveSpec.line(self.params["origin"], self.params["direction"], self.domain)
        return read_sampled_csv(self.path, self.domain)

    def build(self) -> Curve:
        """构造曲线；reparametrize 为真时先按弧长重新参数化"""
        curve = make_curve(self.to_spec(), strict=not self.reparametrize)
        if self.reparametrize:
            curve = arclength_reparam(curve)
            logger.info(f"脊线已按弧长重新参数化，新定义域 {curve.domain}")
        return curve

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind, **self.params}
        if self.domain is not None:
            data["domain"] = list(self.domain)
        if self.path:
            data["path"] = self.path
        if self.reparametrize:
            data["reparametrize"] = True
        return data


@dataclass(frozen=True)
class RadiusConfig:
    """半径配置：{kind, 参数…}"""

    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    path: str = ""

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: str = "") -> "RadiusConfig":
        kind = data.get("kind")
        if not isinstance(kind, str):
            raise ConfigError("配置缺少 radius.kind")
        params = {k: v for k, v in data.items() if k not in ("kind", "path")}
        path = _resolve(data["path"], base_dir) if "path" in data else ""
        if kind == "sampled" and not path:
            raise ConfigError("采样半径需要 radius.path（CSV 文件）")
        if kind == "minimal":
            _number(data, "c1", "radius")
            _number(data, "c2", "radius")
        return cls(kind=kind, params=params, path=path)

    @property
    def minimal_params(self) -> Optional[MinimalRadiusParams]:
        """minimal 类型的 (c₁, c₂)；cosh_scaled 类型按 C = c₂ − ln(2c₁) 反推"""
        if self.kind == "minimal":
            return MinimalRadiusParams(float(self.params["c1"]), float(self.params["c2"]))
        if self.kind == "cosh_scaled":
            c1 = float(self.params["c1"])
            return MinimalRadiusParams(c1, float(self.params["C"]) + math.log(2.0 * c1))
        return None

    def build(self, domain: Tuple[float, float]) -> RadiusFunction:
        """
        构造半径函数

        Args:
            domain: 使用区间（minimal 类型据此检查分支）
        """
        try:
            if self.kind == "minimal":
                allow = bool(self.params.get("allow_branch_crossing", False))
                return minimal_radius(self.minimal_params, domain, allow_branch_crossing=allow)
            if self.kind == "sampled":
                return read_radius_csv(self.path)
            numeric = {k: float(v) for k, v in self.params.items()}
            return RadiusFunction(self.kind, numeric)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"半径参数格式错误（{self.kind}）", str(e))

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"kind": self.kind, **self.params}
        if self.path:
            data["path"] = self.path
        return data


@dataclass(frozen=True)
class FrameConfig:
    """标架积分配置：{u0, h, u1?, seed_rotation_deg?}"""

    u0: float
    h: float
    u1: Optional[float] = None
    seed_rotation_deg: float = 0.0

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FrameConfig":
        u1 = _number(data, "u1", "frame") if "u1" in data else None
        return cls(
            u0=_number(data, "u0", "frame"),
            h=_number(data, "h", "frame"),
            u1=u1,
            seed_rotation_deg=_number(data, "seed_rotation_deg", "frame", 0.0),
        )

    def to_dict(self) -> Dict[str, Any]:
        return {k: v for k, v in asdict(self).items() if v is not None}


@dataclass(frozen=True)
class GridConfig:
    """网格配置：{nu, nv, u_range?}"""

    nu: int
    nv: int
    u_range: Optional[Tuple[float, float]] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GridConfig":
        u_range = _interval(data["u_range"], "grid.u_range") if "u_range" in data else None
        return cls(nu=_integer(data, "nu", "grid"), nv=_integer(data, "nv", "grid"), u_range=u_range)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"nu": self.nu, "nv": self.nv}
        if self.u_range is not None:
            data["u_range"] = list(self.u_range)
        return data


@dataclass(frozen=True)
class OracleSettings:
    """有限差分 oracle 配置：{h, order}"""

    h: float = 1e-4
    order: int = 2

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "OracleSettings":
        order = data.get("order", 2)
        if order not in (2, 4):
            raise ConfigError("oracle.order 只能是 2 或 4", f"实际值 {order!r}")
        return cls(h=_number(data, "h", "oracle", 1e-4), order=int(order))

    def to_oracle_config(self) -> OracleConfig:
        try:
            return OracleConfig.uniform(self.h, self.order)
        except CanalGeometryError as e:
            raise ConfigError("oracle 配置非法", str(e))


@dataclass(frozen=True)
class CheckSettings:
    """检验参数：{k, weingarten_tol, oracle_tol}"""

    k: float = 1.0
    weingarten_tol: float = 1e-8
    oracle_tol: float = 1e-5

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "CheckSettings":
        return cls(
            k=_number(data, "k", "checks", 1.0),
            weingarten_tol=_number(data, "weingarten_tol", "checks", 1e-8),
            oracle_tol=_number(data, "oracle_tol", "checks", 1e-5),
        )


@dataclass(frozen=True)
class RunConfig:
    """一次运行的完整配置"""

    curve: CurveConfig
    radius: RadiusConfig
    frame: FrameConfig
    grid: GridConfig
    oracle: OracleSettings = field(default_factory=OracleSettings)
    checks: CheckSettings = field(default_factory=CheckSettings)
    source: str = ""

    @classmethod
    def from_dict(cls, data: Dict[str, Any], base_dir: str = "", source: str = "") -> "RunConfig":
        """
        从字典创建配置

        Args:
            data: JSON 解析结果
            base_dir: 相对路径的基准目录（一般为配置文件所在目录）
            source: 配置来源，仅用于日志

        Returns:
            RunConfig: 配置对象

        Raises:
            ConfigError: 缺少必填项或类型错误
        """
        if not isinstance(data, dict):
            raise ConfigError("配置文档必须是 JSON 对象")
        return cls(
            curve=CurveConfig.from_dict(_section(data, "curve"), base_dir),
            radius=RadiusConfig.from_dict(_section(data, "radius"), base_dir),
            frame=FrameConfig.from_dict(_section(data, "frame")),
            grid=GridConfig.from_dict(_section(data, "grid")),
            oracle=OracleSettings.from_dict(_section(data, "oracle", required=False)),
            checks=CheckSettings.from_dict(_section(data, "checks", required=False)),
            source=source,
        )

    def to_dict(self) -> Dict[str, Any]:
        """转换为字典（与 from_dict 的输入格式一致）"""
        return {
            "curve": self.curve.to_dict(),
            "radius": self.radius.to_dict(),
            "frame": self.frame.to_dict(),
            "grid": self.grid.to_dict(),
            "oracle": asdict(self.oracle),
            "checks": asdict(self.checks),
        }

    # ------------------------------------------------------------ 构造运行对象

    def frame_interval(self, curve: Curve) -> Tuple[float, float]:
        u1 = self.frame.u1 if self.frame.u1 is not None else curve.domain[1]
        return self.frame.u0, u1

    def build_framed_curve(self) -> FramedCurve:
        """构造脊线并积分平行传输标架"""
        curve = self.curve.build()
        u0, u1 = self.frame_interval(curve)
        rotation = None
        if self.frame.seed_rotation_deg:
            rotation = rotation_in_plane(math.radians(self.frame.seed_rotation_deg), 0, 1)
        fc = frame_curve(curve, u0, u1, self.frame.h, seed_rotation=rotation)
        logger.info(f"标架积分：{len(fc)} 个节点，区间 [{fc.u_range[0]}, {fc.u_range[1]}]")
        return fc

    def grid_spec(self, fc: FramedCurve) -> GridSpec:
        u_range = self.grid.u_range if self.grid.u_range is not None else fc.u_range
        return GridSpec(self.grid.nu, self.grid.nv, u_range)

    def build_radius(self, grid: GridSpec) -> RadiusFunction:
        return self.radius.build(grid.u_range)


def load_run_config(path: str) -> RunConfig:
    """
    读取运行配置文件

    Args:
        path: JSON 文件路径

    Returns:
        RunConfig: 配置对象

    Raises:
        ConfigError: 文件不存在、不是合法 JSON 或内容不符合格式
    """
    if not os.path.isfile(path):
        raise ConfigError("配置文件不存在", path)
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigError("配置文件不是合法的 JSON", f"{path}: {e}")

    config = RunConfig.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)), source=path)
    logger.info(f"成功加载配置文件: {path}")
    return config
