"""
错误类型模块
实验室所有模块共享的异常层次
"""

from typing import Any, Optional


class LabError(Exception):
    """实验室异常基类"""


class DomainError(LabError, ValueError):
    """参数超出定义域（如 x <= 0 求 K_ν）"""


class DivergenceError(DomainError):
    """被积函数在端点处不可积"""

    def __init__(self, message: str, endpoint: str):
        super().__init__(message)
        self.endpoint = endpoint


class SingularPointError(DomainError):
    """在单纯形边界上求被积函数值"""


class StructuralError(LabError, ArithmeticError):
    """递推矩阵出现零分母，或精确线性方程组无解/秩不足"""


class PrecisionError(LabError, ArithmeticError):
    """
    在允许的层数或精度内无法达到目标精度

    属性:
        partial: 迄今为止最好的结果（可能为 None）
        required_digits: 已知时，给出需要的输入位数
    """

    def __init__(self, message: str, partial: Any = None,
                 required_digits: Optional[int] = None):
        super().__init__(message)
        self.partial = partial
        self.required_digits = required_digits


class EvaluationError(LabError, ArithmeticError):
    """连分数或 z 链中出现除零"""


class UnsupportedSubfamilyError(LabError, NotImplementedError):
    """(n-j) 为奇数的子族尚未实现"""


class VerificationError(LabError, AssertionError):
    """恒等式重新发现失败或递推残差超限"""

    def __init__(self, message: str, report: Any = None):
        super().__init__(message)
        self.report = report
