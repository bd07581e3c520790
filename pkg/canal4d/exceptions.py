"""
统一异常处理模块

定义项目中使用的异常层次结构，提供清晰的错误分类和友好的错误信息。

输入类错误（InputError）对应命令行退出码 1，数值类错误（NumericalError）对应退出码 2。
"""

from typing import Optional


class CanalGeometryError(Exception):
    """基础异常类 - 所有项目异常的父类"""

    def __init__(self, message: str = "", details: str = ""):
        self.message = message
        self.details = details
        super().__init__(self.message)

    def __str__(self):
        if self.details:
            return f"{self.message} - {self.details}"
        return self.message


class InputError(CanalGeometryError):
    """输入/配置相关错误"""

    pass


class NumericalError(CanalGeometryError):
    """数值计算相关错误"""

    pass


# ---------------------------------------------------------------- 输入类错误


class InvalidSpec(InputError):
    """曲线规格不满足不变量"""

    pass


class ConfigError(InputError):
    """配置相关错误"""

    pass


class InvalidParameter(InputError):
    """参数取值非法"""

    pass


class OutOfDomain(InputError):
    """参数超出定义域"""

    pass


class StepTooLarge(InputError):
    """积分步长过大"""

    pass


class GridTooSmall(InputError):
    """网格尺寸不足"""

    pass


class InvalidMesh(InputError):
    """网格数据非法"""

    pass


class WrongMode(InputError):
    """曲率公式模式与曲面不匹配"""

    pass


class NotATube(InputError):
    """曲面不是直线脊线上的管面"""

    pass


class BranchViolation(InputError):
    """极小半径的隐式关系离开主分支"""

    pass


class NotOrthonormal(InputError):
    """向量组不是标准正交的"""

    pass


class NotUnitSpeed(InputError):
    """曲线在该参数处不是单位速度"""

    pass


class DegenerateSpeed(InputError):
    """曲线速度退化（存在驻点）"""

    pass


class NonpositiveRadius(InputError):
    """半径函数在使用区间内非正"""

    def __init__(self, message: str = "", details: str = "", u: Optional[float] = None):
        super().__init__(message, details)
        self.u = u


class IoError(InputError):
    """文件读写错误"""

    pass


# ---------------------------------------------------------------- 数值类错误


class RankDeficient(NumericalError):
    """Gram-Schmidt 在第 step 步出现秩亏"""

    def __init__(self, step: int, details: str = ""):
        super().__init__(f"向量组秩亏（第 {step} 步）", details)
        self.step = step


class FrenetUndefined(NumericalError):
    """Frenet 标架在该点不存在（step=2: κ=0；step=3: 曲线落在低维子空间）"""

    def __init__(self, step: int, details: str = ""):
        super().__init__(f"Frenet 标架未定义（第 {step} 步秩亏）", details)
        self.step = step


class GimbalLock(NumericalError):
    """欧拉角提取时 cosθ 过小"""

    pass


class MismatchedTangent(NumericalError):
    """两个标架的切向量不一致"""

    pass


class Irregular(NumericalError):
    """曲面片在该点不正则（W² = EG − F² 过小）"""

    pass


class TubeSingular(NumericalError):
    """管面公式中 f = 0"""

    pass


class NonOrthogonalPatch(NumericalError):
    """参数化不满足 F = 0"""

    pass


class FormulaMismatch(NumericalError):
    """标量平均曲率公式与 |H⃗| 不一致"""

    pass


def exit_code_for(error: BaseException) -> int:
    """将异常映射为命令行退出码

    Args:
        error: 异常实例

    Returns:
        int: 1 表示输入错误，2 表示数值失败
    """
    if isinstance(error, NumericalError):
        return 2
    return 1


def friendly_error_message(error: BaseException) -> str:
    """将底层异常转换为用户友好的中文提示

    Args:
        error: 异常实例

    Returns:
        str: 用户友好的错误提示
    """
    if isinstance(error, ConfigError):
        return f"配置文件有误：{error}"
    if isinstance(error, IoError):
        return f"文件读写失败：{error}"
    if isinstance(error, NonpositiveRadius):
        return f"半径函数在 u={error.u} 处非正，请缩小 u 区间。"
    if isinstance(error, (Irregular, TubeSingular)):
        return f"曲面在某些点不正则：{error}"
    if isinstance(error, FormulaMismatch):
        return f"闭式公式与数值结果不一致：{error}"
    if isinstance(error, CanalGeometryError):
        return str(error)

    # 默认返回原始信息
    return f"{type(error).__name__}: {error}"
