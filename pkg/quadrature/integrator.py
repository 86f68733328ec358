"""
一维求积模块
在 u=1 处拆分：(0,1] 用 tanh-sinh 型变换，[1,∞) 用指数衰减型变换，逐层加倍节点直到收敛
"""

import math
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple, Union

import mpmath
from mpmath import mp, mpf

from core.config import get_config
from core.errors import DivergenceError, DomainError, PrecisionError
from core.numbers import BigReal, Precision
from core.specfun import bessel_values
from .products import BesselProduct, BesselSum, as_sum, moment_product
from .rules import FINITE, TAIL, Node, get_rule, tail_cutoff

logger = logging.getLogger(__name__)

# 至少比较三层（0, 1, 2）才判定收敛
MIN_LEVELS = 3


@dataclass(frozen=True)
class QuadratureResult:
    """
    求积结果

    属性:
        value: 积分值（误差半径不超过 error_estimate）
        error_estimate: 误差估计
        levels_used: 使用的层数
        nodes: 被积函数求值次数
    """
    value: BigReal
    error_estimate: BigReal
    levels_used: int
    nodes: int

    @classmethod
    def build(cls, value: mpf, error: mpf, bits: int, levels: int, nodes: int) -> "QuadratureResult":
        return cls(BigReal(value, error, bits), BigReal(error, mpf(0), bits), levels, nodes)

    @classmethod
    def zero(cls, bits: int) -> "QuadratureResult":
        return cls.build(mpf(0), mpf(0), bits, 0, 0)

    def scaled(self, factor: Union[Fraction, int]) -> "QuadratureResult":
        """乘以精确有理数"""
        factor = Fraction(factor)
        bits = self.value.prec_bits
        with mp.workprec(bits):
            f = mpf(factor.numerator) / factor.denominator
            value = self.value.value * f
            error = self.error_estimate.value * abs(f) + abs(value) * mpf(2) ** (-bits)
        return QuadratureResult.build(value, error, bits, self.levels_used, self.nodes)

    def combine(self, other: "QuadratureResult", coeff: Union[Fraction, int] = 1) -> "QuadratureResult":
        """self + coeff·other，误差相加"""
        other = other.scaled(coeff)
        bits = min(self.value.prec_bits, other.value.prec_bits)
        with mp.workprec(bits):
            value = self.value.value + other.value.value
            error = self.error_estimate.value + other.error_estimate.value + abs(value) * mpf(2) ** (-bits)
        return QuadratureResult.build(value, error, bits, max(self.levels_used, other.levels_used),
                                      self.nodes + other.nodes)


class Panel:
    """
    一个求积区间上的逐层求和器

    参数:
        rule: 双指数规则
        integrand: 以节点为参数的被积函数
        x_max: 尾部截断点（仅对尾部规则有意义）
    """

    def __init__(self, rule, integrand: Callable[[Node], mpf], x_max: Optional[mpf] = None):
        self.rule = rule
        self.integrand = integrand
        self.x_max = x_max

    def level_nodes(self, level: int) -> Sequence[Node]:
        nodes = self.rule.nodes(level)
        if self.x_max is None:
            return nodes
        return [node for node in nodes if node.x <= self.x_max]

    def level_sum(self, level: int) -> Tuple[mpf, mpf, int]:
        """返回本层新增节点上的 (Σ w·f, Σ |w·f|, 节点数)"""
        total = mpf(0)
        total_abs = mpf(0)
        nodes = self.level_nodes(level)
        for node in nodes:
            term = node.weight * self.integrand(node)
            total += term
            total_abs += abs(term)
        return total, total_abs, len(nodes)


def integrate_panels(panels: List[Panel], prec: Precision, max_levels: Optional[int] = None,
                     label: str = "积分") -> QuadratureResult:
    """
    逐层加倍节点密度，直到相邻两层之差不超过 10^-target_digits

    异常:
        PrecisionError: 超过最大层数仍未收敛，partial 为最后一层的结果
    """
    if max_levels is None:
        max_levels = get_config().max_levels
    max_levels = max(max_levels, MIN_LEVELS)
    bits = prec.bits
    tol = prec.tolerance
    with mp.workprec(bits):
        total = mpf(0)
        total_abs = mpf(0)
        count = 0
        prev = None
        diff = None
        for level in range(max_levels):
            for panel in panels:
                s, s_abs, n = panel.level_sum(level)
                total += s
                total_abs += s_abs
                count += n
            h = mpf(2) ** (-level)
            estimate = h * total
            roundoff = h * total_abs * (count + 1) * mpf(2) ** (-bits)
            if prev is not None:
                diff = abs(estimate - prev)
                logger.debug(f"{label} 第 {level} 层: {mpmath.nstr(estimate, 15)}，层差 {mpmath.nstr(diff, 3)}")
                if level + 1 >= MIN_LEVELS and diff + roundoff <= tol:
                    return QuadratureResult.build(estimate, diff + roundoff, bits, level + 1, count)
            prev = estimate
        error = (diff if diff is not None else abs(estimate)) + roundoff
        partial = QuadratureResult.build(estimate, error, bits, max_levels, count)
        raise PrecisionError(
            f"{label} 在 {max_levels} 层内未收敛（误差估计 {mpmath.nstr(error, 3)}）",
            partial=partial)


def _bessel_integrand(f: BesselSum, bits: int) -> Callable[[Node], mpf]:
    need_i = f.needs_i

    def integrand(node: Node) -> mpf:
        return f.evaluate(node.x, node.bessel(bits, need_i))
    return integrand


def half_line_panels(integrand: Callable[[Node], mpf], bits: int, p: int, decay: int) -> List[Panel]:
    """(0,1] 与 [1, x_cut] 两个区间"""
    return [
        Panel(get_rule(FINITE, bits), integrand),
        Panel(get_rule(TAIL, bits), integrand, x_max=tail_cutoff(bits, p, decay)),
    ]


def moment(f: Union[BesselProduct, BesselSum], prec: Precision,
           max_levels: Optional[int] = None) -> QuadratureResult:
    """
    求 ∫₀^∞ u^p·K₀^a·K₁^b·I₀^c·I₁^d du

    参数:
        f: Bessel 乘积（或其有理线性组合）
        prec: 精度
        max_levels: 最大层数，默认取配置

    返回:
        误差估计不超过 10^-target_digits 的求积结果

    异常:
        DivergenceError: 被积函数不可积，指明端点
        PrecisionError: 未收敛
    """
    f = as_sum(f)
    failure = f.divergence()
    if failure:
        raise DivergenceError(failure[1], endpoint=failure[0])
    if f.is_zero:
        return QuadratureResult.zero(prec.bits)
    bits = prec.bits
    p_max = max(product.p for product in f.products)
    panels = half_line_panels(_bessel_integrand(f, bits), bits, p_max, f.decay)
    result = integrate_panels(panels, prec, max_levels, label=f"∫{f}")
    logger.info(f"∫{f} = {result.value.to_decimal(20)}…（{result.levels_used} 层，{result.nodes} 个节点）")
    return result


def normalized_moment(kappa: int, n: int, j: int, prec: Precision,
                      max_levels: Optional[int] = None) -> QuadratureResult:
    """
    I_{n,j}^{(κ)} = (1/n!)·∫u^{n+1}·K₀^{κ-j}·K₁^j du

    异常:
        DomainError: 如果指标超出范围（0 <= j <= κ，n >= j-1）
    """
    check_moment_index(kappa, n, j)
    result = moment(moment_product(kappa, n, j), prec, max_levels)
    return result.scaled(Fraction(1, math.factorial(n)))


def check_moment_index(kappa: int, n: int, j: int) -> None:
    if kappa < 1:
        raise DomainError(f"κ 必须 >= 1，收到: {kappa}")
    if not 0 <= j <= kappa:
        raise DomainError(f"j 必须满足 0 <= j <= κ={kappa}，收到: {j}")
    if n < 0 or n < j - 1:
        raise DomainError(f"n 必须满足 n >= max(0, j-1)，收到: n={n}, j={j}")


def integrate_unit_interval(func: Callable[[mpf, mpf], mpf], prec: Precision,
                            max_levels: Optional[int] = None, label: str = "∫₀¹") -> QuadratureResult:
    """
    求 ∫₀¹ func(x) dx，func 同时接收 x 与 1-x（端点奇异时保留精度）
    """
    def integrand(node: Node) -> mpf:
        return func(node.x, node.xc)
    return integrate_panels([Panel(get_rule(FINITE, prec.bits), integrand)], prec, max_levels, label)


def integrate_direct(f: BesselSum, lo: mpf, hi: Optional[mpf], prec: Precision,
                     max_levels: Optional[int] = None) -> QuadratureResult:
    """
    求 ∫_lo^hi f（hi=None 表示 ∞），节点上直接求 Bessel 函数值

    用于嵌套积分在节点集合之外的边界段。
    """
    bits = prec.bits
    need_i = f.needs_i
    if hi is not None:
        # u = lo + (hi-lo)·v, v ∈ (0,1]
        def finite(node: Node) -> mpf:
            with mp.workprec(bits):
                width = hi - lo
                u = lo + width * node.x
                return width * f.evaluate(u, bessel_values(u, bits, need_i))
        return integrate_panels([Panel(get_rule(FINITE, bits), finite)], prec, max_levels, label="边界段")

    # u = lo·v, v ∈ [1,∞)
    def tail(node: Node) -> mpf:
        with mp.workprec(bits):
            u = lo * node.x
            return lo * f.evaluate(u, bessel_values(u, bits, need_i))
    p_max = max(product.p for product in f.products)
    x_max = tail_cutoff(bits, p_max, float(lo) * f.decay)
    return integrate_panels([Panel(get_rule(TAIL, bits), tail, x_max=x_max)], prec, max_levels,
                            label="尾部段")
