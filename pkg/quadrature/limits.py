"""
闭式参考值与大 n 极限

K-Bessel 积分的闭式汇总表，以及 2^{n-1}∫uK₀ⁿ/n! → e^{-2γ}、∫K₀ⁿ/n! → 2e^{-γ} 的逼近序列
"""

import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
from mpmath import mp

from core.closed_form import PI, PSI1_DIFF, Expr, Rational, zeta_symbol
from core.numbers import BigReal, Precision
from core.specfun import digamma_at_one
from .integrator import moment
from .products import BesselProduct

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ClosedFormEntry:
    """汇总表的一行：被积函数与它的闭式值"""
    integrand: BesselProduct
    target: Expr

    @property
    def label(self) -> str:
        return f"∫{self.integrand}"


def closed_form_table() -> List[ClosedFormEntry]:
    """K-Bessel 积分汇总表"""
    return [
        ClosedFormEntry(BesselProduct(1, 1), Rational(Fraction(1))),
        ClosedFormEntry(BesselProduct(1, 2), Rational(Fraction(1, 2))),
        ClosedFormEntry(BesselProduct(0, 1), PI / 2),
        ClosedFormEntry(BesselProduct(0, 2), Fraction(3, 2) * zeta_symbol(2)),
        ClosedFormEntry(BesselProduct(1, 3), PSI1_DIFF / 12),
        ClosedFormEntry(BesselProduct(1, 4), Fraction(7, 8) * zeta_symbol(3)),
        ClosedFormEntry(BesselProduct(1, 3, 0, 1), Fraction(3, 8) * zeta_symbol(2)),
    ]


def find_closed_form(f: BesselProduct) -> Optional[Expr]:
    """在汇总表中查找 f 的闭式值，没有时返回 None"""
    for entry in closed_form_table():
        if entry.integrand == f:
            return entry.target
    return None


@dataclass
class LimitReport:
    """
    大 n 极限的逼近序列

    属性:
        n_values: 使用的 n
        moment_ratios: 2^{n-1}∫uK₀ⁿ/n!
        k0_ratios: ∫K₀ⁿ/n!
        moment_limit: e^{2ψ₀(1)}
        k0_limit: 2e^{ψ₀(1)}
        moment_monotone: 与极限之差是否单调减小
        k0_monotone: 同上
    """
    n_values: List[int]
    moment_ratios: List[BigReal] = field(default_factory=list)
    k0_ratios: List[BigReal] = field(default_factory=list)
    moment_limit: Optional[BigReal] = None
    k0_limit: Optional[BigReal] = None
    moment_monotone: bool = False
    k0_monotone: bool = False

    def gaps(self) -> List[Tuple[int, BigReal, BigReal]]:
        """(n, 第一个序列与极限之差, 第二个序列与极限之差)"""
        return [(n, m - self.moment_limit, k - self.k0_limit)
                for n, m, k in zip(self.n_values, self.moment_ratios, self.k0_ratios)]


def _monotone_gap(values: Sequence[BigReal], limit: BigReal) -> bool:
    gaps = [abs(float(v - limit)) for v in values]
    return all(b < a for a, b in zip(gaps, gaps[1:]))


def large_n_limits(n_values: Sequence[int], prec: Precision,
                   max_levels: Optional[int] = None) -> LimitReport:
    """
    计算两个归一化序列及其极限

    参数:
        n_values: 递增的 n（>= 1）
        prec: 精度；积分值约为 n!/2^n，内部按其量级追加位数以保持相对精度

    返回:
        LimitReport
    """
    n_values = sorted(set(int(n) for n in n_values))
    report = LimitReport(n_values=n_values)
    psi = digamma_at_one(prec)
    with mp.workprec(prec.bits):
        report.moment_limit = BigReal(mpmath.exp(2 * psi.value), 2 * psi.radius * mpmath.exp(2 * psi.value) +
                                      mpmath.mpf(2) ** (-prec.bits), prec.bits)
        report.k0_limit = BigReal(2 * mpmath.exp(psi.value), 2 * psi.radius * mpmath.exp(psi.value) +
                                  mpmath.mpf(2) ** (-prec.bits), prec.bits)
    for n in n_values:
        fact = math.factorial(n)
        extra = len(str(fact))
        inner = prec.raised(extra)
        first = moment(BesselProduct(1, n), inner, max_levels).scaled(Fraction(2 ** (n - 1), fact))
        second = moment(BesselProduct(0, n), inner, max_levels).scaled(Fraction(1, fact))
        report.moment_ratios.append(first.value)
        report.k0_ratios.append(second.value)
        logger.info(f"n={n}: 2^(n-1)∫uK0^n/n! = {first.value.to_decimal(15)}，∫K0^n/n! = {second.value.to_decimal(15)}")
    if len(n_values) > 1:
        report.moment_monotone = _monotone_gap(report.moment_ratios, report.moment_limit)
        report.k0_monotone = _monotone_gap(report.k0_ratios, report.k0_limit)
    return report
