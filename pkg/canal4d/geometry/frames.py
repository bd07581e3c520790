"""
平行传输标架

沿脊线积分平行传输标架方程 T′ = Σ kᵢMᵢ，Mᵢ′ = −kᵢT（kᵢ = ⟨γ″, Mᵢ⟩），
计算 Frenet 标架，并逐点检验两者之间的欧拉角关系。
"""

import logging
import math
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from canal4d.exceptions import (
    FrenetUndefined,
    GimbalLock,
    InvalidParameter,
    MismatchedTangent,
    NotUnitSpeed,
    OutOfDomain,
    RankDeficient,
    StepTooLarge,
)
from canal4d.geometry.curves import Curve
from canal4d.geometry.vectors import Frame4, as_vec4, complete_frame, gram_schmidt

logger = logging.getLogger(__name__)

SEED_CURVATURE_TOL = 1e-8
FRENET_FD_STEP = 1e-5
GIMBAL_TOL = 1e-6
TANGENT_MATCH_TOL = 1e-8


# ---------------------------------------------------------------- 标架 ODE


def _frame_rhs(curve: Curve, u: float, state: np.ndarray) -> np.ndarray:
    """标架方程右端项，state 按行存放 (T, M1, M2, M3)"""
    k = state[1:] @ curve.second(u)
    rate = np.empty((4, 4))
    rate[0] = k @ state[1:]
    rate[1:] = -np.outer(k, state[0])
    return rate


def _rk4_step(curve: Curve, u: float, state: np.ndarray, dt: float) -> np.ndarray:
    k1 = _frame_rhs(curve, u, state)
    k2 = _frame_rhs(curve, u + 0.5 * dt, state + 0.5 * dt * k1)
    k3 = _frame_rhs(curve, u + 0.5 * dt, state + 0.5 * dt * k2)
    k4 = _frame_rhs(curve, u + dt, state + dt * k3)
    return state + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def _unit_tangent(curve: Curve, u: float) -> np.ndarray:
    d1 = curve.tangent(u)
    speed = float(np.linalg.norm(d1))
    if abs(speed - 1.0) > curve.speed_tolerance:
        raise NotUnitSpeed(f"曲线在 u={u} 处不是单位速度", f"|γ′|={speed!r}")
    return d1 / speed


def _reorthonormalize(tangent: np.ndarray, state: np.ndarray) -> np.ndarray:
    """以精确切向为锚点，对法向部分做两遍修正 Gram-Schmidt"""
    out = np.empty((4, 4))
    out[0] = tangent
    for i in range(1, 4):
        w = state[i].copy()
        for _ in range(2):
            for j in range(i):
                w -= np.dot(out[j], w) * out[j]
        out[i] = w / np.linalg.norm(w)
    return out


def _drift(state: np.ndarray) -> float:
    return float(np.max(np.abs(state[1:] @ state[0])))


# ---------------------------------------------------------------- 数据类型


@dataclass(frozen=True, eq=False)
class FramedCurve:
    """
    网格上带平行传输标架的脊线

    Attributes:
        curve: 脊线
        grid: 严格递增的参数节点 u₀..u_N
        points: 节点处的 γ(u)，形状 (N+1, 4)
        matrices: 节点处的标架，形状 (N+1, 4, 4)，每个按行存放 (T, M1, M2, M3)
        k: 节点处的 (k₁, k₂, k₃)，形状 (N+1, 3)
        dk: 节点值的中心差分 kᵢ′，形状 (N+1, 3)
        seed_index: 种子标架所在节点
        max_drift: 积分过程中重新正交化之前 |⟨Mᵢ, T⟩| 的最大值
    """

    curve: Curve
    grid: np.ndarray
    points: np.ndarray
    matrices: np.ndarray
    k: np.ndarray
    dk: np.ndarray
    seed_index: int = 0
    max_drift: float = 0.0

    def __post_init__(self):
        for name in ("grid", "points", "matrices", "k", "dk"):
            arr = np.array(getattr(self, name), dtype=np.float64)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self) -> int:
        return int(self.grid.size)

    @property
    def u_range(self) -> Tuple[float, float]:
        return float(self.grid[0]), float(self.grid[-1])

    @property
    def k1(self) -> np.ndarray:
        return self.k[:, 0]

    @property
    def k2(self) -> np.ndarray:
        return self.k[:, 1]

    @property
    def k3(self) -> np.ndarray:
        return self.k[:, 2]

    @property
    def seed(self) -> Frame4:
        return self.frame(self.seed_index)

    def frame(self, index: int) -> Frame4:
        """第 index 个节点的标架"""
        return Frame4(self.matrices[index])

    @property
    def frames(self) -> Sequence[Frame4]:
        return [Frame4(m) for m in self.matrices]

    def contains(self, u: float) -> bool:
        lo, hi = self.u_range
        slack = 1e-12 * max(1.0, hi - lo)
        return lo - slack <= u <= hi + slack

    def _nearest(self, u: float) -> int:
        if not self.contains(u):
            lo, hi = self.u_range
            raise OutOfDomain(f"参数 u={u} 超出标架网格范围", f"[{lo}, {hi}]")
        idx = int(np.searchsorted(self.grid, u))
        idx = min(max(idx, 1), self.grid.size - 1)
        return idx - 1 if (u - self.grid[idx - 1]) <= (self.grid[idx] - u) else idx

    def frame_matrix_at(self, u: float, method: str = "rk4") -> np.ndarray:
        """
        任意 u 处的标架矩阵（节点处精确）

        Args:
            u: 网格范围内的参数
            method: "rk4" 从最近节点做一步 RK4 后重新正交化（对 u 光滑）；
                "linear" 在相邻节点之间线性混合后重新正交化

        Returns:
            np.ndarray: 4×4 标架矩阵
        """
        idx = self._nearest(u)
        u_node = float(self.grid[idx])
        if u == u_node:
            return np.array(self.matrices[idx])

        if method == "rk4":
            state = _rk4_step(self.curve, u_node, self.matrices[idx], u - u_node)
        elif method == "linear":
            lo = int(np.clip(np.searchsorted(self.grid, u) - 1, 0, self.grid.size - 2))
            t = (u - self.grid[lo]) / (self.grid[lo + 1] - self.grid[lo])
            state = (1.0 - t) * self.matrices[lo] + t * self.matrices[lo + 1]
        else:
            raise InvalidParameter(f"未知的标架插值方法: {method}", "可选: rk4, linear")

        return _reorthonormalize(_unit_tangent(self.curve, u), state)

    def frame_at(self, u: float, method: str = "rk4") -> Frame4:
        """任意 u 处的标架（参见 frame_matrix_at）"""
        return Frame4(self.frame_matrix_at(u, method))

    def curvatures_at(self, matrix: np.ndarray, u: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        给定 u 处的标架矩阵，返回 (k, k′)

        k 由 ⟨γ″(u), Mᵢ(u)⟩ 直接求得；k′ 对节点差分值做线性插值。
        """
        k = matrix[1:] @ self.curve.second(u)
        dk = np.array([np.interp(u, self.grid, self.dk[:, i]) for i in range(3)])
        return k, dk


@dataclass(frozen=True, eq=False)
class FrenetData:
    """Frenet 标架 (T, N, B1, B2) 与曲率 κ, τ, σ"""

    u: float
    T: np.ndarray
    N: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    kappa: float
    tau: float
    sigma: float

    @property
    def matrix(self) -> np.ndarray:
        return np.vstack([self.T, self.N, self.B1, self.B2])


@dataclass(frozen=True)
class EulerAngles:
    """Frenet 标架相对平行传输标架的欧拉角（弧度）"""

    theta: float
    psi: float
    phi: float

    def normal_rotation(self) -> np.ndarray:
        """
        以 (M1, M2, M3) 为基时 (N, B1, B2) 的行矩阵

        Returns:
            np.ndarray: 3×3 旋转矩阵 Rz(ψ)·Ry(θ)·Rx(φ)
        """
        ct, st = math.cos(self.theta), math.sin(self.theta)
        cp, sp = math.cos(self.psi), math.sin(self.psi)
        cf, sf = math.cos(self.phi), math.sin(self.phi)
        return np.array(
            [
                [ct * cp, -cf * sp + sf * st * cp, sf * sp + cf * st * cp],
                [ct * sp, cf * cp + sf * st * sp, -sf * cp + cf * st * sp],
                [-st, sf * ct, cf * ct],
            ]
        )

    def predicted_k(self, kappa: float) -> np.ndarray:
        """由 κ 与欧拉角给出的 (k₁, k₂, k₃)"""
        return kappa * self.normal_rotation()[0]


@dataclass(frozen=True)
class Theorem1Report:
    """k 关系残差报告"""

    max_k1: float
    max_k2: float
    max_k3: float
    evaluated: int
    skipped: int

    @property
    def max_residual(self) -> float:
        return max(self.max_k1, self.max_k2, self.max_k3)


# ---------------------------------------------------------------- 操作


def rotation_in_plane(angle: float, i: int = 0, j: int = 1) -> np.ndarray:
    """法向空间中 (Mᵢ₊₁, Mⱼ₊₁) 平面内转角 angle 的 3×3 旋转"""
    if i == j or not (0 <= i < 3 and 0 <= j < 3):
        raise InvalidParameter("旋转平面的两个下标必须不同且在 0..2 内", f"i={i}, j={j}")
    rot = np.eye(3)
    c, s = math.cos(angle), math.sin(angle)
    rot[i, i], rot[i, j] = c, -s
    rot[j, i], rot[j, j] = s, c
    return rot


def rotate_normal(frame: Frame4, rotation: np.ndarray) -> Frame4:
    """
    对标架的法向部分施加常旋转 R：Mᵢ ↦ Σⱼ Rᵢⱼ Mⱼ

    Args:
        frame: 原标架
        rotation: 3×3 旋转矩阵（正交且行列式为 +1）

    Returns:
        Frame4: 切向不变的新标架
    """
    rot = np.asarray(rotation, dtype=np.float64)
    if rot.shape != (3, 3):
        raise InvalidParameter("法向旋转需要 3×3 矩阵", f"实际形状 {rot.shape}")
    if np.max(np.abs(rot @ rot.T - np.eye(3))) > 1e-10 or np.linalg.det(rot) < 0:
        raise InvalidParameter("法向旋转必须是正交矩阵且行列式为 +1")
    matrix = np.vstack([frame.T, rot @ frame.normal])
    return Frame4(matrix)


def seed_frame(curve: Curve, u0: float) -> Frame4:
    """
    确定性的初始标架

    T = γ′(u0)；若 |γ″(u0)| > 1e-8 则 M1 = γ″/|γ″|，其余法向量由 complete_frame 补全；
    否则整个法向部分都由 complete_frame([T]) 给出。

    Args:
        curve: 单位速度脊线
        u0: 初始参数

    Returns:
        Frame4: 正定向的初始标架

    Raises:
        NotUnitSpeed: |γ′(u0)| 偏离 1
    """
    curve.check_domain(u0)
    tangent = _unit_tangent(curve, u0)
    accel = curve.second(u0)
    kappa = float(np.linalg.norm(accel))
    if kappa > SEED_CURVATURE_TOL:
        # 样条曲线的 γ″ 不严格垂直于 γ′，先去掉切向分量
        principal = accel - np.dot(accel, tangent) * tangent
        return complete_frame([tangent, principal / np.linalg.norm(principal)])
    return complete_frame([tangent])


def _node_grid(u0: float, u1: float, h: float) -> np.ndarray:
    span = abs(u1 - u0)
    direction = 1.0 if u1 > u0 else -1.0
    n_full = int(math.floor(span / h + 1e-9))
    nodes = u0 + direction * h * np.arange(n_full + 1)
    if span - n_full * h > 1e-12 * span:
        nodes = np.append(nodes, u1)
    else:
        nodes[-1] = u1
    return nodes


def propagate(curve: Curve, u0: float, u1: float, h: float, seed: Frame4) -> FramedCurve:
    """
    用经典四阶 Runge-Kutta 积分平行传输标架

    每步之后把 T 重置为精确的单位切向，并对 M1..M3 重新正交化；节点间距为 h，
    最后一步截短。u1 < u0 时反向积分，结果仍按 u 递增排列，种子位于最后一个节点。

    Args:
        curve: 单位速度脊线
        u0: 种子标架所在参数
        u1: 积分终点
        h: 步长，0 < h ≤ |u1 − u0|/8
        seed: u0 处的标架

    Returns:
        FramedCurve: 节点、标架与 kᵢ

    Raises:
        StepTooLarge: h 超过区间长度的 1/8
        NotUnitSpeed: 曲线在某节点不是单位速度
        MismatchedTangent: 种子标架的 T 与 γ′(u0) 不一致
    """
    if not h > 0:
        raise InvalidParameter("积分步长必须为正", f"h={h}")
    if h > abs(u1 - u0) / 8.0:
        raise StepTooLarge("步长超过积分区间长度的 1/8", f"h={h}, |u1-u0|={abs(u1 - u0)}")
    curve.check_domain(u0)
    curve.check_domain(u1)

    tangent0 = _unit_tangent(curve, u0)
    mismatch = float(np.linalg.norm(seed.T - tangent0))
    if mismatch > TANGENT_MATCH_TOL:
        raise MismatchedTangent("种子标架的 T 与 γ′(u0) 不一致", f"|ΔT|={mismatch:.3e}")

    nodes = _node_grid(float(u0), float(u1), float(h))
    n = nodes.size
    matrices = np.empty((n, 4, 4))
    matrices[0] = _reorthonormalize(tangent0, seed.matrix)
    max_drift = 0.0

    for i in range(n - 1):
        raw = _rk4_step(curve, nodes[i], matrices[i], nodes[i + 1] - nodes[i])
        max_drift = max(max_drift, _drift(raw))
        matrices[i + 1] = _reorthonormalize(_unit_tangent(curve, nodes[i + 1]), raw)

    seed_index = 0
    if u1 < u0:
        nodes, matrices = nodes[::-1], matrices[::-1]
        seed_index = n - 1

    points = np.array([curve.position(u) for u in nodes])
    k = np.array([m[1:] @ curve.second(u) for u, m in zip(nodes, matrices)])
    dk = np.gradient(k, nodes, axis=0, edge_order=2)

    logger.debug(f"标架积分完成：{n} 个节点，h={h}，最大漂移 {max_drift:.3e}")
    return FramedCurve(
        curve=curve,
        grid=nodes,
        points=points,
        matrices=matrices,
        k=k,
        dk=dk,
        seed_index=seed_index,
        max_drift=max_drift,
    )


def frame_curve(
    curve: Curve,
    u0: float,
    u1: float,
    h: float,
    seed_rotation: Optional[np.ndarray] = None,
) -> FramedCurve:
    """由 seed_frame 取种子（可选再旋转法向部分）后调用 propagate"""
    seed = seed_frame(curve, u0)
    if seed_rotation is not None:
        seed = rotate_normal(seed, seed_rotation)
    return propagate(curve, u0, u1, h, seed)


def _frenet_vectors(curve: Curve, u: float, tol: float) -> np.ndarray:
    try:
        t, n, b1 = gram_schmidt([curve.tangent(u), curve.second(u), curve.third(u)], tol)
    except RankDeficient as e:
        raise FrenetUndefined(e.step, f"u={u}")
    return complete_frame([t, n, b1]).matrix


def frenet_at(curve: Curve, u: float, tol: float = 1e-10) -> FrenetData:
    """
    Frenet 标架与曲率

    (T, N, B1) 由 (γ′, γ″, γ‴) 的 Gram-Schmidt 得到，B2 补全定向；
    κ = |γ″|，τ = ⟨N′, B1⟩，σ = ⟨B1′, B2⟩，导数用步长 1e-5 的中心差分。

    Args:
        curve: 单位速度脊线
        u: 距离定义域端点至少 2e-5 的参数
        tol: 秩亏容差

    Returns:
        FrenetData: Frenet 标架与 κ, τ, σ

    Raises:
        FrenetUndefined: step=2 表示 κ=0，step=3 表示曲线落在低维子空间
    """
    lo, hi = curve.domain
    margin = 2.0 * FRENET_FD_STEP
    if u - lo < margin or hi - u < margin:
        raise OutOfDomain(f"frenet_at 需要内部参数（距端点 ≥ {margin}）", f"u={u}")

    frame = _frenet_vectors(curve, u, tol)
    ahead = _frenet_vectors(curve, u + FRENET_FD_STEP, tol)
    behind = _frenet_vectors(curve, u - FRENET_FD_STEP, tol)
    d_frame = (ahead - behind) / (2.0 * FRENET_FD_STEP)

    return FrenetData(
        u=float(u),
        T=as_vec4(frame[0]),
        N=as_vec4(frame[1]),
        B1=as_vec4(frame[2]),
        B2=as_vec4(frame[3]),
        kappa=float(np.linalg.norm(curve.second(u))),
        tau=float(np.dot(d_frame[1], frame[2])),
        sigma=float(np.dot(d_frame[2], frame[3])),
    )


def _principal_angle(angle: float) -> float:
    return math.pi if angle <= -math.pi else angle


def euler_angles_at(fr: FrenetData, pt: Frame4) -> EulerAngles:
    """
    由 Frenet 标架与平行传输标架提取欧拉角

    θ = −asin⟨B2, M1⟩，φ = atan2(⟨B2, M2⟩, ⟨B2, M3⟩)，ψ = atan2(⟨B1, M1⟩, ⟨N, M1⟩)

    Raises:
        MismatchedTangent: 两个标架的 T 相差超过 1e-8
        GimbalLock: |cosθ| ≤ 1e-6
    """
    gap = float(np.linalg.norm(fr.T - pt.T))
    if gap > TANGENT_MATCH_TOL:
        raise MismatchedTangent("Frenet 标架与平行传输标架的切向量不一致", f"|ΔT|={gap:.3e}")

    b2_m1 = float(np.clip(np.dot(fr.B2, pt.M1), -1.0, 1.0))
    if math.sqrt(max(0.0, 1.0 - b2_m1 * b2_m1)) <= GIMBAL_TOL:
        raise GimbalLock("欧拉角奇异：|cosθ| 过小", f"⟨B2,M1⟩={b2_m1!r}")

    theta = -math.asin(b2_m1)
    phi = math.atan2(float(np.dot(fr.B2, pt.M2)), float(np.dot(fr.B2, pt.M3)))
    psi = math.atan2(float(np.dot(fr.B1, pt.M1)), float(np.dot(fr.N, pt.M1)))
    return EulerAngles(theta=theta, psi=_principal_angle(psi), phi=_principal_angle(phi))


def frenet_from_angles(pt: Frame4, angles: EulerAngles) -> np.ndarray:
    """由平行传输标架与欧拉角重建 (N, B1, B2)，形状 (3, 4)"""
    return angles.normal_rotation() @ pt.normal


def theorem1_residuals(fc: FramedCurve, curve: Optional[Curve] = None) -> Theorem1Report:
    """
    逐节点检验 k₁ = κcosθcosψ 等三个关系

    Frenet 标架不存在、欧拉角奇异或节点过于靠近端点时跳过该节点并计数。

    Args:
        fc: 已积分的标架
        curve: 脊线，默认取 fc.curve

    Returns:
        Theorem1Report: 三个残差的最大值与跳过的节点数
    """
    curve = curve if curve is not None else fc.curve
    residuals = np.zeros(3)
    skipped = 0
    for i, u in enumerate(fc.grid):
        try:
            fr = frenet_at(curve, float(u))
            angles = euler_angles_at(fr, fc.frame(i))
        except (FrenetUndefined, GimbalLock, MismatchedTangent, OutOfDomain):
            skipped += 1
            continue
        residuals = np.maximum(residuals, np.abs(fc.k[i] - angles.predicted_k(fr.kappa)))

    evaluated = len(fc) - skipped
    logger.info(f"k 关系检验：{evaluated} 个节点参与，{skipped} 个节点跳过")
    return Theorem1Report(
        max_k1=float(residuals[0]),
        max_k2=float(residuals[1]),
        max_k3=float(residuals[2]),
        evaluated=evaluated,
        skipped=skipped,
    )


def frame_convergence_ratio(curve: Curve, u0: float, u1: float, h: float) -> float:
    """
    步长减半时终点标架误差的比值

    误差以步长 h/16 的积分结果为参考，取 max |Δ矩阵元|；四阶方法的比值约为 16。
    """
    seed = seed_frame(curve, u0)
    reference = propagate(curve, u0, u1, h / 16.0, seed)
    end = -1 if u1 > u0 else 0

    def end_error(step: float) -> float:
        fc = propagate(curve, u0, u1, step, seed)
        return float(np.max(np.abs(fc.matrices[end] - reference.matrices[end])))

    coarse, fine = end_error(h), end_error(h / 2.0)
    logger.info(f"标架收敛：h={h} 误差 {coarse:.3e}，h/2 误差 {fine:.3e}")
    return coarse / fine
