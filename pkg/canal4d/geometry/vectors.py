"""
四维向量代数

E⁴ 中的内积、范数、Gram-Schmidt 正交化以及确定性的标架补全。
所有值构造后不可变，所有函数均为纯函数。
"""

from dataclasses import dataclass
from typing import Iterable, List, Sequence

import numpy as np
import numpy.typing as npt

from canal4d.exceptions import InvalidParameter, NotOrthonormal, RankDeficient

Vec4 = npt.NDArray[np.float64]

# 秩亏判定的默认相对容差
DEFAULT_RANK_TOL = 1e-10
ORTHONORMAL_TOL = 1e-10
ORIENTATION_TOL = 1e-8

_CANONICAL_BASIS = np.eye(4)


def as_vec4(values: Iterable[float]) -> Vec4:
    """
    转换为只读的四维向量

    Args:
        values: 四个坐标

    Returns:
        Vec4: 形状为 (4,) 的 float64 数组

    Raises:
        InvalidParameter: 形状不对或含 NaN/Inf
    """
    arr = np.array(values, dtype=np.float64).reshape(-1)
    if arr.shape != (4,):
        raise InvalidParameter("Vec4 需要 4 个坐标", f"实际形状 {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidParameter("Vec4 坐标必须有限", f"{arr}")
    arr.setflags(write=False)
    return arr


def vec4(x1: float, x2: float, x3: float, x4: float) -> Vec4:
    """由四个坐标构造 Vec4"""
    return as_vec4((x1, x2, x3, x4))


def dot(u: Sequence[float], v: Sequence[float]) -> float:
    """欧氏内积 Σ uᵢvᵢ"""
    return float(np.dot(np.asarray(u, dtype=np.float64), np.asarray(v, dtype=np.float64)))


def norm(u: Sequence[float]) -> float:
    """欧氏范数"""
    return float(np.linalg.norm(np.asarray(u, dtype=np.float64)))


def gram_schmidt(
    vectors: Sequence[Sequence[float]], tol: float = DEFAULT_RANK_TOL
) -> List[Vec4]:
    """
    修正 Gram-Schmidt 正交化（每个向量做两遍投影）

    Args:
        vectors: 1 到 4 个向量
        tol: 相对于输入向量范数的秩亏容差

    Returns:
        List[Vec4]: 标准正交向量组，张成与输入前缀相同的子空间旗

    Raises:
        RankDeficient: 第 k 步残差范数低于 tol·|v_k|
    """
    if tol <= 0:
        raise InvalidParameter("tol 必须为正", f"tol={tol}")
    if not 1 <= len(vectors) <= 4:
        raise InvalidParameter("gram_schmidt 需要 1 到 4 个向量", f"实际 {len(vectors)} 个")

    basis: List[np.ndarray] = []
    for step, v in enumerate(vectors, start=1):
        w = np.array(v, dtype=np.float64)
        # 按最大分量归一化后再求范数
        scale = float(np.max(np.abs(w)))
        if scale == 0.0 or not np.isfinite(scale):
            raise RankDeficient(step, f"输入向量最大分量为 {scale:.3e}")
        w /= scale
        norm_in = float(np.linalg.norm(w))
        for _ in range(2):
            for q in basis:
                w -= np.dot(q, w) * q
        residual = float(np.linalg.norm(w))
        if residual <= tol * norm_in:
            raise RankDeficient(step, f"残差 {residual:.3e}，输入范数 {norm_in:.3e}")
        basis.append(w / residual)

    return [as_vec4(q) for q in basis]


@dataclass(frozen=True, eq=False)
class Frame4:
    """有序标准正交四标架 (T, M1, M2, M3)，按行存放"""

    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.float64)
        if m.shape != (4, 4):
            raise InvalidParameter("Frame4 需要 4×4 矩阵", f"实际形状 {m.shape}")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_vectors(cls, T, M1, M2, M3) -> "Frame4":
        """由四个向量构造标架"""
        return cls(np.vstack([T, M1, M2, M3]))

    @property
    def T(self) -> np.ndarray:
        return self.matrix[0]

    @property
    def M1(self) -> np.ndarray:
        return self.matrix[1]

    @property
    def M2(self) -> np.ndarray:
        return self.matrix[2]

    @property
    def M3(self) -> np.ndarray:
        return self.matrix[3]

    @property
    def normal(self) -> np.ndarray:
        """法向部分 (M1, M2, M3)，形状 (3, 4)"""
        return self.matrix[1:]

    def orthonormality_defect(self) -> float:
        """max |⟨eᵢ, eⱼ⟩ − δᵢⱼ|"""
        return float(np.max(np.abs(self.matrix @ self.matrix.T - np.eye(4))))

    def determinant(self) -> float:
        return float(np.linalg.det(self.matrix))

    def is_valid(
        self, orth_tol: float = ORTHONORMAL_TOL, det_tol: float = ORIENTATION_TOL
    ) -> bool:
        """是否满足标准正交与正定向两个不变量"""
        return (
            self.orthonormality_defect() <= orth_tol
            and abs(self.determinant() - 1.0) <= det_tol
        )

    def components(self, vector: Sequence[float]) -> np.ndarray:
        """向量在 (T, M1, M2, M3) 下的分量"""
        return self.matrix @ np.asarray(vector, dtype=np.float64)

    def to_ambient(self, coefficients: Sequence[float]) -> np.ndarray:
        """由标架分量还原环境坐标"""
        return np.asarray(coefficients, dtype=np.float64) @ self.matrix


def complete_frame(partial: Sequence[Sequence[float]]) -> Frame4:
    """
    确定性地把 1 到 3 个标准正交向量补全为正定向的 Frame4

    剩余位置按 e₁..e₄ 的顺序做 Gram-Schmidt 填充，跳过与已有向量秩亏的基向量；
    若行列式为负，翻转最后一个补全向量的符号。

    Args:
        partial: 1 到 3 个标准正交向量

    Returns:
        Frame4: 前几个向量与输入一致的正定向标架

    Raises:
        NotOrthonormal: 输入不是标准正交的（容差 1e-8）
    """
    if not 1 <= len(partial) <= 3:
        raise InvalidParameter("complete_frame 需要 1 到 3 个向量", f"实际 {len(partial)} 个")

    leading = np.array(partial, dtype=np.float64)
    gram = leading @ leading.T
    defect = float(np.max(np.abs(gram - np.eye(len(partial)))))
    if defect > 1e-8:
        raise NotOrthonormal("complete_frame 的输入不是标准正交的", f"偏差 {defect:.3e}")

    rows: List[np.ndarray] = list(leading)
    for e in _CANONICAL_BASIS:
        if len(rows) == 4:
            break
        try:
            rows.append(gram_schmidt(rows + [e])[-1])
        except RankDeficient:
            continue

    matrix = np.vstack(rows)
    if np.linalg.det(matrix) < 0:
        # 只翻转补全出来的向量，输入保持不变
        matrix[3] = -matrix[3]
    return Frame4(matrix)
