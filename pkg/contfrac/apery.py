"""
Apéry 型数的闭式
三项递推在特定初值下的解可以写成二项式系数的有限和，k!³ 因子单独提出
"""

import math
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List

from core.errors import DomainError
from .catalog import ThreeTermRecurrence, get_entry

logger = logging.getLogger(__name__)


def _zu1_sum(k: int) -> int:
    return sum(math.comb(k, i) ** 2 * math.comb(2 * i, k) ** 2 for i in range(k + 1))


def _zu2_sum(k: int) -> int:
    return sum(math.comb(k, i) ** 2 * math.comb(2 * i, i) * math.comb(2 * (k - i), k - i)
               for i in range(k + 1))


def _apery_sum(k: int) -> int:
    return sum(math.comb(k, i) ** 2 * math.comb(k + i, i) ** 2 for i in range(k + 1))


@dataclass(frozen=True)
class AperyVariant:
    """
    属性:
        name: 变体名
        binomial_sum: 二项式和 S(k)
        power_of_two: y(k) = k!³·S(k)/2^(power_of_two·k) 中的 power_of_two
        cf_name: 配对递推所在的目录项
        initial: (y(0), y(1))
        factorial_cube: 是否带 k!³ 因子（经典 Apéry 数不带）
    """
    name: str
    binomial_sum: Callable[[int], int]
    power_of_two: int
    cf_name: str
    initial: tuple
    factorial_cube: bool = True

    def recurrence(self) -> ThreeTermRecurrence:
        return get_entry(self.cf_name).recurrence(*self.initial)


VARIANTS: Dict[str, AperyVariant] = {
    "zu1": AperyVariant("zu1", _zu1_sum, 2, "zeta3_pslq", (1, 1)),
    "zu2": AperyVariant("zu2", _zu2_sum, 1, "zeta3_kappa4", (1, 2)),
    # 经典 Apéry 数 1, 5, 73, ...，满足 Apéry 递推除以 k!³ 后的形式，这里只作对照
    "apery": AperyVariant("apery", _apery_sum, 0, "zeta3_apery", (1, 5), factorial_cube=False),
}


def _variant(name: str) -> AperyVariant:
    if name not in VARIANTS:
        raise DomainError(f"未知的变体: {name}。可用: {', '.join(VARIANTS)}")
    return VARIANTS[name]


def apery_closed_forms(k: int, variant: str = "zu1") -> Fraction:
    """
    y(k) 的精确值

    参数:
        k: 下标（>= 0）
        variant: zu1 = k!³/2^(2k)·Σ C(k,i)²C(2i,k)²，zu2 = k!³/2^k·Σ C(k,i)²C(2i,i)C(2(k-i),k-i)

    异常:
        DomainError: k < 0 或变体未知
    """
    if k < 0:
        raise DomainError(f"k 必须 >= 0，收到: {k}")
    spec = _variant(variant)
    cube = math.factorial(k) ** 3 if spec.factorial_cube else 1
    return Fraction(cube * spec.binomial_sum(k), 2 ** (spec.power_of_two * k))


def binomial_part(k: int, variant: str = "zu1") -> int:
    """y(k)·2^(ck)/k!³，即二项式和本身（恒为整数）"""
    if k < 0:
        raise DomainError(f"k 必须 >= 0，收到: {k}")
    return _variant(variant).binomial_sum(k)


def replay_residuals(variant: str, k_max: int) -> List[Fraction]:
    """
    把闭式代入配对递推，返回 k = 1..k_max-1 的残差 y(k+1) - B(k)y(k) + A(k)y(k-1)

    经典 Apéry 数满足的是 k!³ 约去之后的递推，这里按 y(k)·k!³ 代入。
    """
    spec = _variant(variant)
    rec = spec.recurrence()

    def y(k: int) -> Fraction:
        value = apery_closed_forms(k, variant)
        return value if spec.factorial_cube else value * math.factorial(k) ** 3

    residuals = []
    for k in range(1, k_max):
        residuals.append(y(k + 1) - rec.next_value(k, y(k - 1), y(k)))
    bad = sum(1 for r in residuals if r)
    if bad:
        logger.warning(f"{variant}: {bad} 个 k 的递推残差非零")
    return residuals
