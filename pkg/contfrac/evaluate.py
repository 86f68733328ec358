"""
连分数求值与有理逼近
后向迭代求 z(start)、三项递推的精确收敛子、特征根与收敛指数
"""

import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import mpmath
import numpy as np
from mpmath import mp, mpf

from core.config import get_config
from core.errors import DomainError, EvaluationError
from core.numbers import BigReal, Precision
from .catalog import ContFracSpec, ThreeTermRecurrence

logger = logging.getLogger(__name__)

# 与深度 K 比较的较浅深度之差
_DEPTH_GAP = 5


def cf_value_exact(spec: ContFracSpec, depth: int) -> Fraction:
    """
    深度为 depth 的有限连分数的精确值，尾部初值 z(start+depth) = 0

    异常:
        EvaluationError: 某一步分母为零
    """
    if depth < 1:
        raise DomainError(f"深度必须 >= 1，收到: {depth}")
    z = Fraction(0)
    for k in range(spec.start_k + depth, spec.start_k, -1):
        den = spec.denominator(k) + z
        if den == 0:
            raise EvaluationError(f"{spec.name}: k={k} 处分母 D(k)+z(k) 为零")
        z = spec.numerator(k) / den
    return z


def _cf_float(spec: ContFracSpec, depth: int) -> mpf:
    z = mpf(0)
    for k in range(spec.start_k + depth, spec.start_k, -1):
        den = spec.denominator.as_mpf(k) + z
        if not den:
            raise EvaluationError(f"{spec.name}: k={k} 处分母 D(k)+z(k) 为零")
        z = spec.numerator.as_mpf(k) / den
    return z


def cf_value(spec: ContFracSpec, depth: Optional[int] = None, prec: Optional[Precision] = None) -> BigReal:
    """
    后向迭代 z(k-1) = N(k)/(D(k)+z(k)) 求 z(start_k)

    参数:
        spec: 目录项
        depth: 深度 K，默认取配置（300）
        prec: 精度

    返回:
        BigReal，半径为深度 K 与 K-5 之差加舍入误差（启发式）
    """
    depth = get_config().cf_depth if depth is None else depth
    if depth < 1:
        raise DomainError(f"深度必须 >= 1，收到: {depth}")
    prec = prec or Precision(get_config().default_digits)
    bits = prec.bits
    with mp.workprec(bits + 20):
        value = _cf_float(spec, depth)
        shallow = _cf_float(spec, max(1, depth - _DEPTH_GAP))
        radius = abs(value - shallow) + abs(value) * depth * mpf(2) ** (-bits)
    logger.debug(f"{spec.name} 深度 {depth}: 差 {mpmath.nstr(radius, 3)}")
    return BigReal(+value, radius, bits)


@dataclass
class ConvergentSequence:
    """
    两组初值下的精确递推序列 p(k)、q(k)，k = start, start+1, ...

    p_k/q_k 是有理逼近，q 的增长即研究对象，不做约分。
    """
    recurrence: ThreeTermRecurrence
    numerators: List[Fraction] = field(default_factory=list)
    denominators: List[Fraction] = field(default_factory=list)

    @property
    def start(self) -> int:
        return self.recurrence.start

    @property
    def k_max(self) -> int:
        return self.start + len(self.numerators) - 1

    def pair(self, k: int) -> Tuple[Fraction, Fraction]:
        i = k - self.start
        return self.numerators[i], self.denominators[i]

    def ratio(self, k: int) -> Fraction:
        p, q = self.pair(k)
        if q == 0:
            raise EvaluationError(f"k={k} 处分母序列为零")
        return p / q

    def ratios(self) -> List[Optional[Fraction]]:
        return [p / q if q else None for p, q in zip(self.numerators, self.denominators)]

    def limit(self, prec: Precision) -> BigReal:
        """最后一个比值，半径取最后两个比值之差"""
        with mp.workprec(prec.bits):
            last = self.ratio(self.k_max)
            prev = self.ratio(self.k_max - 1)
            value = mpf(last.numerator) / last.denominator
            radius = abs(value - mpf(prev.numerator) / prev.denominator)
        return BigReal(value, radius, prec.bits)


def convergents(rec: ThreeTermRecurrence, k_max: int,
                numerator_init: Sequence = (1, 0), denominator_init: Sequence = (0, 1),
                normalize: bool = False) -> ConvergentSequence:
    """
    在两组初值下迭代 y(k+1) = B(k)·y(k) - A(k)·y(k-1)

    参数:
        rec: 三项递推，初值下标为 rec.start
        k_max: 最后一项的下标（>= start+2）
        numerator_init: p 序列的 (y(s), y(s+1))
        denominator_init: q 序列的 (y(s), y(s+1))
        normalize: 为节省内存，每步把 p、q 的最近两项同除以公因子（比值不变）

    返回:
        ConvergentSequence
    """
    if k_max < rec.start + 2:
        raise DomainError(f"k_max 必须 >= {rec.start + 2}，收到: {k_max}")
    p = [Fraction(x) for x in numerator_init]
    q = [Fraction(x) for x in denominator_init]
    seq = ConvergentSequence(rec.with_initial(p[0], p[1]), list(p), list(q))
    for k in range(rec.start + 1, k_max):
        p_next = rec.next_value(k, seq.numerators[-2], seq.numerators[-1])
        q_next = rec.next_value(k, seq.denominators[-2], seq.denominators[-1])
        seq.numerators.append(p_next)
        seq.denominators.append(q_next)
        if normalize:
            _normalize_tail(seq)
    return seq


def _normalize_tail(seq: ConvergentSequence) -> None:
    values = seq.numerators[-2:] + seq.denominators[-2:]
    g = 0
    for v in values:
        g = math.gcd(g, v.numerator)
    if g > 1:
        seq.numerators[-2:] = [v / g for v in seq.numerators[-2:]]
        seq.denominators[-2:] = [v / g for v in seq.denominators[-2:]]


@dataclass(frozen=True)
class CharacteristicRoots:
    """
    极限特征方程 λ² - b·λ + a = 0 的根，以及 q(k+1)/(q(k)·k^d) 外推的经验值

    属性:
        b, a: B 与 A 的最高次系数
        degree: B 的次数 d（A 的次数应为 2d）
        roots: 按模降序
        empirical: 外推得到的主根估计
    """
    b: Fraction
    a: Fraction
    degree: int
    roots: Tuple[float, float]
    empirical: Optional[float]


def _extrapolate(ks: Sequence[int], values: Sequence[float], order: int = 3) -> float:
    """以 1/k 的多项式拟合并取截距"""
    order = min(order, len(ks) - 1)
    coeffs = np.polyfit(1.0 / np.asarray(ks, dtype=float), np.asarray(values, dtype=float), order)
    return float(coeffs[-1])


def characteristic_roots(rec: ThreeTermRecurrence, k_max: int = 200) -> CharacteristicRoots:
    """
    极限特征根及其经验估计

    异常:
        DomainError: A 的次数不是 B 的两倍（此时不存在这种形式的极限方程）
    """
    d = rec.b.degree
    if rec.a.degree != 2 * d:
        raise DomainError(f"A 的次数 {rec.a.degree} 不等于 B 的次数的两倍 {2 * d}")
    b, a = rec.b.leading, rec.a.leading
    roots = np.roots([1.0, -float(b), float(a)])
    roots = tuple(sorted((float(np.real(r)) for r in roots), key=abs, reverse=True))
    seq = convergents(rec, k_max, numerator_init=(1, 0), denominator_init=(0, 1))
    ks, ratios = [], []
    window = range(max(rec.start + 2, k_max - 40), k_max)
    for k in window:
        q_k, q_next = seq.pair(k)[1], seq.pair(k + 1)[1]
        if q_k:
            ks.append(k)
            ratios.append(float(q_next / q_k / Fraction(k) ** d))
    empirical = _extrapolate(ks, ratios) if len(ks) >= 2 else None
    logger.info(f"特征根 {roots}，经验主根 {empirical}")
    return CharacteristicRoots(b, a, d, roots, empirical)


@dataclass(frozen=True)
class ExponentFit:
    """
    log|target - p_k/q_k| 对 log q̃_k 的线性拟合（q̃_k = q_k/k!^d）

    属性:
        slope: 收敛指数（取正号），退化时为 None
        residual: 拟合残差的均方根
        points: 参与拟合的点数
        fast_enough: 指数是否明显大于 1
        degenerate: 拟合是否退化
    """
    slope: Optional[float]
    residual: Optional[float]
    points: int
    fast_enough: bool
    degenerate: bool


def convergence_exponent(rec: ThreeTermRecurrence, target: BigReal, k_max: int,
                         numerator_init: Sequence = (1, 0), denominator_init: Sequence = (0, 1),
                         prec: Optional[Precision] = None) -> ExponentFit:
    """
    有理逼近的经验收敛指数

    参数:
        rec: 三项递推
        target: 极限值（精度需高于逼近误差）
        k_max: 最大下标（>= 10）

    返回:
        ExponentFit；有效点少于 3 个时 degenerate=True
    """
    if k_max < 10:
        raise DomainError(f"k_max 必须 >= 10，收到: {k_max}")
    bits = prec.bits if prec else target.prec_bits
    seq = convergents(rec, k_max, numerator_init, denominator_init)
    d = rec.b.degree
    xs, ys = [], []
    with mp.workprec(bits):
        floor = target.radius * 10 + mpf(2) ** (-bits + 10)
        for k in range(seq.start + 2, seq.k_max + 1):
            p, q = seq.pair(k)
            if q == 0:
                continue
            error = abs(target.value - mpf(p.numerator) / p.denominator / (mpf(q.numerator) / q.denominator))
            scaled_q = abs(mpf(q.numerator) / q.denominator) / mpmath.factorial(k) ** d
            if error <= floor or scaled_q <= 1:
                continue
            xs.append(float(mpmath.log(scaled_q)))
            ys.append(float(mpmath.log(error)))
    if len(xs) < 3 or max(xs) - min(xs) <= 0:
        logger.warning(f"收敛指数拟合退化：只有 {len(xs)} 个有效点")
        return ExponentFit(None, None, len(xs), False, True)
    slope, intercept = np.polyfit(xs, ys, 1)
    fitted = np.polyval([slope, intercept], xs)
    residual = float(np.sqrt(np.mean((np.asarray(ys) - fitted) ** 2)))
    exponent = -float(slope)
    return ExponentFit(exponent, residual, len(xs), exponent > 1.05, False)
