"""
数值类型模块
提供带误差半径的任意精度实数 BigReal、精度描述 Precision 与精确有理数 BigRational
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath
from mpmath import mp, mpf

from .errors import DomainError

BigRational = Fraction

Number = Union["BigReal", Fraction, int, mpf]

LOG2_10 = math.log2(10)


@dataclass(frozen=True)
class Precision:
    """
    精度描述

    参数:
        target_digits: 要求的十进制有效位数
        guard_digits: 额外的保护位数
    """
    target_digits: int
    guard_digits: int = 10

    def __post_init__(self):
        if self.target_digits < 1:
            raise DomainError(f"目标位数必须为正整数: {self.target_digits}")
        if self.guard_digits < 1:
            raise DomainError(f"保护位数必须为正整数: {self.guard_digits}")

    @property
    def bits(self) -> int:
        """工作精度（二进制位）"""
        return math.ceil((self.target_digits + self.guard_digits) * LOG2_10)

    @property
    def tolerance(self) -> mpf:
        """绝对误差容限 10^-target_digits"""
        with mp.workprec(self.bits):
            return mpf(10) ** (-self.target_digits)

    def raised(self, extra_digits: int) -> "Precision":
        """返回提高了 extra_digits 位的新精度"""
        return Precision(self.target_digits + extra_digits, self.guard_digits)


def to_mpf(x: Number, bits: int) -> mpf:
    """把 BigReal / Fraction / int / mpf 转为给定精度下的 mpf"""
    with mp.workprec(bits):
        if isinstance(x, BigReal):
            return +x.value
        if isinstance(x, Fraction):
            return mpf(x.numerator) / x.denominator
        return mpf(x)


def _ulp(v: mpf, bits: int) -> mpf:
    """舍入误差界"""
    if not v:
        return mpf(0)
    return abs(v) * mpf(2) ** (1 - bits)


@dataclass(frozen=True)
class BigReal:
    """
    带误差半径的任意精度实数

    区间风格的保守误差传播：结果半径总不小于真实误差。
    """
    value: mpf
    radius: mpf
    prec_bits: int

    def __post_init__(self):
        if not (self.radius >= 0) or not mpmath.isfinite(self.radius):
            raise DomainError(f"误差半径必须为非负有限数: {self.radius}")

    @classmethod
    def exact(cls, x: Union[Fraction, int], bits: int) -> "BigReal":
        """由精确有理数构造（仅含一次舍入误差）"""
        v = to_mpf(Fraction(x), bits)
        radius = mpf(0) if isinstance(x, int) or Fraction(x).denominator == 1 else _ulp(v, bits)
        return cls(v, radius, bits)

    @classmethod
    def coerce(cls, x: Number, bits: int) -> "BigReal":
        if isinstance(x, BigReal):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.exact(x, bits)
        return cls(to_mpf(x, bits), mpf(0), bits)

    def _bits_with(self, other: "BigReal") -> int:
        return min(self.prec_bits, other.prec_bits)

    def __add__(self, other: Number) -> "BigReal":
        other = BigReal.coerce(other, self.prec_bits)
        bits = self._bits_with(other)
        with mp.workprec(bits):
            v = self.value + other.value
            return BigReal(v, self.radius + other.radius + _ulp(v, bits), bits)

    __radd__ = __add__

    def __neg__(self) -> "BigReal":
        # 取负必须精确，不能按环境精度舍入
        return BigReal(mpmath.fneg(self.value, exact=True), self.radius, self.prec_bits)

    def __sub__(self, other: Number) -> "BigReal":
        return self + (-BigReal.coerce(other, self.prec_bits))

    def __rsub__(self, other: Number) -> "BigReal":
        return BigReal.coerce(other, self.prec_bits) - self

    def __mul__(self, other: Number) -> "BigReal":
        other = BigReal.coerce(other, self.prec_bits)
        bits = self._bits_with(other)
        with mp.workprec(bits):
            v = self.value * other.value
            r = (abs(self.value) * other.radius + abs(other.value) * self.radius
                 + self.radius * other.radius + _ulp(v, bits))
            return BigReal(v, r, bits)

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "BigReal":
        other = BigReal.coerce(other, self.prec_bits)
        bits = self._bits_with(other)
        with mp.workprec(bits):
            if abs(other.value) <= other.radius:
                raise ZeroDivisionError("除数区间包含 0")
            v = self.value / other.value
            lower = abs(other.value) - other.radius
            r = ((abs(self.value) * other.radius + abs(other.value) * self.radius)
                 / (abs(other.value) * lower) + _ulp(v, bits))
            return BigReal(v, r, bits)

    def __rtruediv__(self, other: Number) -> "BigReal":
        return BigReal.coerce(other, self.prec_bits) / self

    def __abs__(self) -> "BigReal":
        if self.value < 0:
            return -self
        return self

    def __float__(self) -> float:
        return float(self.value)

    def contains(self, x: Number, slack: Number = 0) -> bool:
        """判断 x 是否落在 [value - radius - slack, value + radius + slack] 内"""
        with mp.workprec(self.prec_bits):
            return abs(self.value - to_mpf(x, self.prec_bits)) <= self.radius + to_mpf(slack, self.prec_bits)

    def with_radius(self, extra: Number) -> "BigReal":
        """增加误差半径"""
        with mp.workprec(self.prec_bits):
            return BigReal(self.value, self.radius + abs(to_mpf(extra, self.prec_bits)), self.prec_bits)

    def to_decimal(self, digits: int) -> str:
        """以 digits 位有效数字输出十进制字符串"""
        with mp.workprec(self.prec_bits):
            return mpmath.nstr(self.value, digits, strip_zeros=False,
                               min_fixed=-5, max_fixed=digits + 5)

    def __repr__(self) -> str:
        return f"BigReal({mpmath.nstr(self.value, 20)} ± {mpmath.nstr(self.radius, 3)})"


def exp_big(x: BigReal) -> BigReal:
    """exp(x)，半径按导数放大"""
    with mp.workprec(x.prec_bits):
        v = mpmath.exp(x.value)
        r = v * (mpmath.exp(x.radius) - 1) + _ulp(v, x.prec_bits)
        return BigReal(v, r, x.prec_bits)
