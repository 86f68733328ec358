"""
整系数多项式
连分数的分子 N(k)、分母 D(k) 以及三项递推的系数，允许一个公共的整数分母
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Tuple, Union

import sympy
from mpmath import mpf

from core.errors import DomainError

K = sympy.Symbol("k")


@dataclass(frozen=True)
class IntPoly:
    """
    (Σ coefficients[i]·k^i) / denominator

    属性:
        coefficients: 升幂排列的整数系数，零多项式为空元组
        denominator: 正整数
    """
    coefficients: Tuple[int, ...]
    denominator: int = 1

    def __post_init__(self):
        if self.denominator <= 0:
            raise DomainError(f"分母必须为正整数，收到: {self.denominator}")
        if self.coefficients and self.coefficients[-1] == 0:
            raise DomainError(f"最高次系数不能为零: {self.coefficients}")

    @classmethod
    def from_expr(cls, expr: Union[sympy.Expr, str, int]) -> "IntPoly":
        """
        从 k 的 sympy 表达式构造，例如 "(2*k+1)*(17*k**2+17*k+5)"

        异常:
            DomainError: 表达式不是 k 的有理系数多项式
        """
        expr = sympy.sympify(expr, locals={"k": K})
        try:
            poly = sympy.Poly(sympy.expand(expr), K, domain="QQ")
        except sympy.PolynomialError as exc:
            raise DomainError(f"不是 k 的多项式: {expr}") from exc
        coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(poly.all_coeffs())]
        den = 1
        for c in coeffs:
            den = math.lcm(den, c.denominator)
        ints = [int(c * den) for c in coeffs]
        while ints and ints[-1] == 0:
            ints.pop()
        return cls(tuple(ints), den)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def leading(self) -> Fraction:
        """最高次项系数（含分母）"""
        if self.is_zero:
            return Fraction(0)
        return Fraction(self.coefficients[-1], self.denominator)

    def __call__(self, k: Union[int, Fraction]) -> Fraction:
        value = 0
        for c in reversed(self.coefficients):
            value = value * k + c
        return Fraction(value) / self.denominator

    def as_mpf(self, k: int) -> mpf:
        """在当前 mpmath 精度下的值（整数 k）"""
        value = 0
        for c in reversed(self.coefficients):
            value = value * k + c
        return mpf(value) / self.denominator

    def __neg__(self) -> "IntPoly":
        return IntPoly(tuple(-c for c in self.coefficients), self.denominator)

    def as_expr(self) -> sympy.Expr:
        return sympy.Add(*(c * K ** i for i, c in enumerate(self.coefficients))) / self.denominator

    def to_dict(self) -> Dict[str, Any]:
        return {"coefficients": [str(c) for c in self.coefficients], "denominator": str(self.denominator)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "IntPoly":
        return cls(tuple(int(c) for c in data["coefficients"]), int(data.get("denominator", 1)))

    def __str__(self) -> str:
        return str(sympy.factor(self.as_expr()))
