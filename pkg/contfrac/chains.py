"""
由矩递推得到的连分数链
u(k) = I_{2k,top}/I_{2k,0}，z(k) = d(k)·u(k) - c(k)，沿 z(k-1) = N(k)/(D(k)+z(k)) 迭代到 z(0)
"""

import math
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from mpmath import mp, mpf

from core.errors import DomainError, EvaluationError
from core.numbers import BigReal, Precision
from momentalg import MomentIndex, basis_product, decompose
from quadrature import moment
from .catalog import ContFracSpec, get_entry

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Mobius:
    """(alpha + beta·E)/(gamma + delta·E)，E 为基底积分 ∫u·K₀^κ"""
    alpha: Fraction
    beta: Fraction
    gamma: Fraction
    delta: Fraction

    def equivalent(self, other: "Mobius") -> bool:
        """作为 E 的有理函数是否相等"""
        return (self.alpha * other.gamma == other.alpha * self.gamma
                and self.alpha * other.delta + self.beta * other.gamma
                == other.alpha * self.delta + other.beta * self.gamma
                and self.beta * other.delta == other.beta * self.delta)

    def step(self, numerator: Fraction, denominator: Fraction) -> "Mobius":
        """N/(D + self)"""
        return Mobius(numerator * self.gamma, numerator * self.delta,
                      denominator * self.gamma + self.alpha, denominator * self.delta + self.beta)

    def evaluate(self, e: BigReal) -> BigReal:
        den = e * self.delta + self.gamma
        if den.contains(0):
            raise EvaluationError(f"Möbius 分母在 E={e.to_decimal(10)} 处为零")
        return (e * self.beta + self.alpha) / den

    def __str__(self) -> str:
        return f"({self.alpha} + {self.beta}*E)/({self.gamma} + {self.delta}*E)"


@dataclass(frozen=True)
class ChainParameters:
    """
    链的参数

    属性:
        kappa: 权重
        start_k: 起点 k（n = 2k）
        top: u(k) 分子的 j
        c, d: z(k) = d(k)·u(k) - c(k)
        cf_name: 目录中对应的连分数
        expected: z(0) 的闭式（以 E 表示）
        tail_degree: z(k) 的增长次数
        tail_limit: lim z(k)/k^tail_degree
    """
    kappa: int
    start_k: int
    top: int
    c: Callable[[int], int]
    d: Callable[[int], int]
    cf_name: str
    expected: Mobius
    tail_degree: int
    tail_limit: int


CHAINS: Dict[int, ChainParameters] = {
    # z(0) = 3/(2E) - 2
    4: ChainParameters(4, 2, 4,
                       c=lambda k: (2 + 5 * k) * (1 + k) ** 2,
                       d=lambda k: 3 * k * (k - 1) * k,
                       cf_name="zeta3_kappa4",
                       expected=Mobius(Fraction(3), Fraction(-4), Fraction(0), Fraction(2)),
                       tail_degree=3, tail_limit=-2),
    # z(0) = 3/(2E) - 3
    3: ChainParameters(3, 1, 2,
                       c=lambda k: (1 + k) * (3 + 7 * k),
                       d=lambda k: 6 * k ** 2,
                       cf_name="psi1_kappa3",
                       expected=Mobius(Fraction(3), Fraction(-6), Fraction(0), Fraction(2)),
                       tail_degree=2, tail_limit=-1),
}


def _parameters(kappa: int) -> ChainParameters:
    if kappa not in CHAINS:
        raise DomainError(f"连分数链只对 κ ∈ {{3, 4}} 定义，收到: {kappa}")
    return CHAINS[kappa]


def _pair(kappa: int, n: int, j: int) -> Tuple[Fraction, Fraction]:
    """I_{n,j} = p + q·E"""
    dec = decompose(MomentIndex(kappa, n, j))
    return dec.coeff_one, dec.coefficient(1)


def z_at(kappa: int, k: int) -> Mobius:
    """z(k) = d(k)·I_{2k,top}/I_{2k,0} - c(k) 的精确 Möbius 形式"""
    params = _parameters(kappa)
    p1, q1 = _pair(kappa, 2 * k, params.top)
    p0, q0 = _pair(kappa, 2 * k, 0)
    c, d = params.c(k), params.d(k)
    return Mobius(d * p1 - c * p0, d * q1 - c * q0, p0, q0)


@dataclass(frozen=True)
class ChainResult:
    """
    属性:
        z_start: 起点处的精确 z
        z0: 迭代到 k=0 的精确 z
        matches: z0 是否等于预期闭式
        value: z0 的数值（E 取求积值）
        basis_value: 基底积分 E 的求积值
    """
    kappa: int
    start_k: int
    z_start: Mobius
    z0: Mobius
    expected: Mobius
    matches: bool
    value: BigReal
    basis_value: BigReal


def z_chain_from_moments(kappa: int, prec: Precision, max_levels: Optional[int] = None) -> ChainResult:
    """
    从基底分解出发构造 z(start)，沿连分数向下迭代到 z(0)，并与闭式比较

    异常:
        DomainError: κ 不是 3 或 4
        EvaluationError: 迭代中出现零分母
    """
    params = _parameters(kappa)
    spec: ContFracSpec = get_entry(params.cf_name)
    z_start = z_at(kappa, params.start_k)
    z = z_start
    for k in range(params.start_k, 0, -1):
        z = z.step(spec.numerator(k), spec.denominator(k))
        if z.gamma == 0 and z.delta == 0:
            raise EvaluationError(f"κ={kappa} 链在 k={k} 处分母恒为零")
    matches = z.equivalent(params.expected)
    e = moment(basis_product(kappa, 1), prec, max_levels).value
    value = z.evaluate(e)
    logger.info(f"κ={kappa} 链: z(0) = {z}，与闭式{'一致' if matches else '不一致'}")
    return ChainResult(kappa, params.start_k, z_start, z, params.expected, matches, value, e)


@dataclass(frozen=True)
class TailProfile:
    """z(k)/k^deg 的序列与外推极限"""
    kappa: int
    k_values: List[int]
    ratios: List[float]
    extrapolated: float
    expected: int


def chain_tail_profile(kappa: int, k_values: Sequence[int], prec: Precision,
                       max_levels: Optional[int] = None) -> TailProfile:
    """
    由矩的基底分解计算 z(k)/k^deg，并以 1/k 多项式外推

    分解系数随 k 增大而迅速增长，E 的求积精度按抵消的位数追加。
    """
    params = _parameters(kappa)
    k_values = sorted(set(int(k) for k in k_values if k >= params.start_k))
    if len(k_values) < 2:
        raise DomainError(f"至少需要两个 k >= {params.start_k}")
    chains = [z_at(kappa, k) for k in k_values]
    extra = 5
    for k, z in zip(k_values, chains):
        size = max(_digits(x) for x in (z.alpha, z.beta, z.gamma, z.delta))
        extra = max(extra, size + math.ceil(2 * k * math.log10(kappa ** 2)) + 5)
    inner = prec.raised(extra)
    e = moment(basis_product(kappa, 1), inner, max_levels).value
    ratios = []
    with mp.workprec(prec.bits):
        for k, z in zip(k_values, chains):
            ratios.append(float(z.evaluate(e).value / mpf(k) ** params.tail_degree))
    limit = _extrapolate(k_values, ratios)
    logger.info(f"κ={kappa} 链尾部 z(k)/k^{params.tail_degree} 外推为 {limit}")
    return TailProfile(kappa, k_values, ratios, limit, params.tail_limit)


def _digits(x: Fraction) -> int:
    return max(0, len(str(abs(x.numerator))) - len(str(x.denominator)) + 1)


def _extrapolate(ks: Sequence[int], values: Sequence[float]) -> float:
    order = min(3, len(ks) - 1)
    coeffs = np.polyfit(1.0 / np.asarray(ks, dtype=float), np.asarray(values, dtype=float), order)
    return float(coeffs[-1])
