"""
嵌套积分模块
ζ̃(f,g) = ∫₀^∞ f(u)·∫₀^u g(x)dx du，以及 I_{ρ²α⁶} 的各种等价写法

外层沿双指数节点逐层加密；内层原函数沿升序节点累积并跨层记忆，
相邻节点之间在对数坐标下用 Gauss-Legendre 求积，点数按所需位数自适应选取。
"""

import bisect
import math
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union

import mpmath
from mpmath import mp, mpf

from core.errors import DivergenceError, DomainError, PrecisionError
from core.numbers import Precision
from core.specfun import bessel_values, zeta
from .integrator import QuadratureResult, integrate_direct, integrate_panels, moment
from .products import BesselProduct, BesselSum, as_sum
from .rules import (FINITE, TAIL, Node, gauss_legendre_degree, gauss_legendre_nodes,
                    get_rule, tail_cutoff)

logger = logging.getLogger(__name__)

_MAX_SPLIT_DEPTH = 24

Integrand = Union[BesselProduct, BesselSum]


class _Antiderivative:
    """
    沿外层节点累积的内层积分

    upper=False 时为 G(u) = ∫₀^u g，upper=True 时为 H(u) = ∫_u^∞ g。
    """

    def __init__(self, g: BesselSum, bits: int, upper: bool):
        self.g = g
        self.bits = bits
        self.upper = upper
        self.need_i = g.needs_i
        self._xs: List[mpf] = []
        self._values: List[mpf] = []
        self._errors: List[mpf] = []
        self._gvals: List[mpf] = []
        self.lookup: Dict[int, Tuple[mpf, mpf]] = {}
        self.evaluations = 0
        exps = [p.exponent_at_zero for p in g.products]
        self._e0 = min(exps) if exps else 0
        self._log_power = max((p.log_power for p in g.products), default=0)

    def _g(self, x: mpf) -> mpf:
        self.evaluations += 1
        return self.g.evaluate(x, bessel_values(x, self.bits, need_i=self.need_i))

    def _gap(self, xa: mpf, xb: mpf, ga: mpf, gb: mpf, tol: mpf, depth: int = 0) -> Tuple[mpf, mpf]:
        """∫_xa^xb g，返回 (值, 误差界)"""
        dx = xb - xa
        bound = 2 * dx * max(abs(ga), abs(gb))
        if bound <= tol:
            return dx * (ga + gb) / 2, bound
        digits = float(mpmath.log10(bound / tol))
        sa, sb = mpmath.log(xa), mpmath.log(xb)
        half = (sb - sa) / 2
        # e^{-m·x} 在复平面上的增长限制了可用的椭圆
        b = min(mp.pi / 2, 1 / mpmath.sqrt(xb))
        rho = (b + mpmath.sqrt(b * b + half * half)) / half
        points = math.ceil((digits + 4) / (2 * float(mpmath.log10(rho))))
        degree = gauss_legendre_degree(points)
        if degree is None:
            if depth >= _MAX_SPLIT_DEPTH:
                raise PrecisionError(f"内层积分在 [{mpmath.nstr(xa, 8)}, {mpmath.nstr(xb, 8)}] 上无法收敛")
            xm = mpmath.exp((sa + sb) / 2)
            gm = self._g(xm)
            left, err_l = self._gap(xa, xm, ga, gm, tol / 2, depth + 1)
            right, err_r = self._gap(xm, xb, gm, gb, tol / 2, depth + 1)
            return left + right, err_l + err_r
        mid = (sa + sb) / 2
        total = mpf(0)
        for xi, wi in gauss_legendre_nodes(degree, self.bits):
            x = mpmath.exp(mid + half * xi)
            total += wi * self._g(x) * x
        return half * total, tol

    def _edge(self, x: mpf, gx: mpf, tol: mpf) -> Tuple[mpf, mpf]:
        """节点集合之外的边界段：G(x)=∫₀^x g 或 H(x)=∫_x^∞ g"""
        if not self.upper:
            bound = x * abs(gx) * (self._log_power + 2)
            if bound <= tol:
                return x * gx / (self._e0 + 1), bound
            result = integrate_direct(self.g, mpf(0), x, _precision_for(tol))
        else:
            decay = self.g.decay
            bound = 2 * abs(gx) / decay
            if bound <= tol:
                return gx / decay, bound
            result = integrate_direct(self.g, x, None, _precision_for(tol))
        return result.value.value, result.error_estimate.value

    def add(self, node: Node, gx: mpf, tol: mpf) -> None:
        """加入一个新节点并计算其原函数值"""
        x = node.x
        idx = bisect.bisect_left(self._xs, x)
        if not self.upper:
            if idx == 0:
                value, err = self._edge(x, gx, tol)
            else:
                xa = self._xs[idx - 1]
                gap, gap_err = self._gap(xa, x, self._gvals[idx - 1], gx, tol)
                value, err = self._values[idx - 1] + gap, self._errors[idx - 1] + gap_err
        else:
            if idx == len(self._xs):
                value, err = self._edge(x, gx, tol)
            else:
                xb = self._xs[idx]
                gap, gap_err = self._gap(x, xb, gx, self._gvals[idx], tol)
                value, err = self._values[idx] + gap, self._errors[idx] + gap_err
        self._xs.insert(idx, x)
        self._values.insert(idx, value)
        self._errors.insert(idx, err)
        self._gvals.insert(idx, gx)
        self.lookup[id(node)] = (value, err)


def _precision_for(tol: mpf) -> Precision:
    digits = max(5, math.ceil(-float(mpmath.log10(tol))))
    return Precision(digits)


class _NestedPanel:
    """
    外层节点：两个规则（(0,1] 与 [1,x_cut]）合并为一个逐层求和器，
    每层先按方向顺序计算新节点上的内层原函数，再累加 w·f·G。
    """

    def __init__(self, f: BesselSum, g: BesselSum, prec: Precision, upper: bool, x_max: mpf):
        self.f = f
        self.bits = prec.bits
        self.tol = prec.tolerance
        self.need_i = f.needs_i or g.needs_i
        self.inner = _Antiderivative(g, self.bits, upper)
        self.upper = upper
        self.rules = (get_rule(FINITE, self.bits), get_rule(TAIL, self.bits))
        self.x_max = x_max
        self.weighted_abs = mpf(0)
        self.inner_error = mpf(0)
        self.count = 0

    def level_sum(self, level: int) -> Tuple[mpf, mpf, int]:
        nodes = list(self.rules[0].nodes(level))
        nodes += [node for node in self.rules[1].nodes(level) if node.x <= self.x_max]
        fvals = []
        for node in nodes:
            values = node.bessel(self.bits, self.need_i)
            fvals.append((node, self.f.evaluate(node.x, values), self.inner.g.evaluate(node.x, values)))
        self.count += len(nodes)
        h = mpf(2) ** (-level)
        self.weighted_abs += sum((node.weight * abs(fx) for node, fx, _ in fvals), mpf(0))
        scale = max(h * self.weighted_abs, mpf(1))
        tol_gap = self.tol / (4 * (self.count + 1) * scale)
        ordered = sorted(fvals, key=lambda item: item[0].x, reverse=self.upper)
        for node, _, gx in ordered:
            self.inner.add(node, gx, tol_gap)
        total = mpf(0)
        total_abs = mpf(0)
        for node, fx, _ in fvals:
            inner_value, inner_err = self.inner.lookup[id(node)]
            term = node.weight * fx * inner_value
            total += term
            total_abs += abs(term)
            self.inner_error += node.weight * abs(fx) * inner_err
        return total, total_abs, len(nodes)


def _check_nested(f: BesselSum, g: BesselSum, upper: bool) -> None:
    if not upper:
        if g.exponent_at_zero <= -1:
            raise DivergenceError(f"内层积分 ∫₀^u ({g}) 在 0 处发散", endpoint="0")
        if g.decay <= 0:
            raise DivergenceError(f"内层被积函数 {g} 在 ∞ 处不衰减", endpoint="inf")
        if f.exponent_at_zero + g.exponent_at_zero + 1 <= -1:
            raise DivergenceError(f"外层积分在 0 处发散: {f} × ∫₀^u ({g})", endpoint="0")
        if f.decay <= 0:
            raise DivergenceError(f"外层被积函数 {f} 在 ∞ 处不衰减", endpoint="inf")
    else:
        if g.decay <= 0:
            raise DivergenceError(f"内层积分 ∫_u^∞ ({g}) 在 ∞ 处发散", endpoint="inf")
        if f.exponent_at_zero + min(0, g.exponent_at_zero + 1) <= -1:
            raise DivergenceError(f"外层积分在 0 处发散: {f} × ∫_u^∞ ({g})", endpoint="0")
        if f.decay + g.decay <= 0:
            raise DivergenceError(f"外层积分在 ∞ 处发散: {f} × ∫_u^∞ ({g})", endpoint="inf")


def _nested(f: Integrand, g: Integrand, prec: Precision, upper: bool,
            max_levels: Optional[int]) -> QuadratureResult:
    f, g = as_sum(f), as_sum(g)
    if f.is_zero or g.is_zero:
        return QuadratureResult.zero(prec.bits)
    _check_nested(f, g, upper)
    bits = prec.bits
    p_f = max(p.p for p in f.products)
    p_g = max(p.p for p in g.products)
    if upper:
        x_max = max(tail_cutoff(bits, p_f, f.decay + g.decay), tail_cutoff(bits, p_g, g.decay))
    else:
        x_max = tail_cutoff(bits, p_f, f.decay)
    panel = _NestedPanel(f, g, prec, upper, x_max)
    kind = "∫_u^∞" if upper else "∫₀^u"
    label = f"ζ̃[{f}; {kind} {g}]"
    result = integrate_panels([panel], prec, max_levels, label=label)
    with mp.workprec(bits):
        h = mpf(2) ** (1 - result.levels_used)
        error = result.error_estimate.value + h * panel.inner_error
    logger.info(f"{label} = {result.value.to_decimal(20)}…（内层求值 {panel.inner.evaluations} 次）")
    return QuadratureResult.build(result.value.value, error, bits, result.levels_used,
                                  result.nodes + panel.inner.evaluations)


def nested_moment(f: Integrand, g: Integrand, prec: Precision,
                  max_levels: Optional[int] = None) -> QuadratureResult:
    """
    嵌套积分 ζ̃(f,g) = ∫₀^∞ f(u) ∫₀^u g(x) dx du

    参数:
        f: 外层被积函数
        g: 内层被积函数
        prec: 精度

    异常:
        DivergenceError: 内层或外层发散（分别报告）
        PrecisionError: 未收敛
    """
    return _nested(f, g, prec, upper=False, max_levels=max_levels)


def tail_nested(f: Integrand, g: Integrand, prec: Precision,
                max_levels: Optional[int] = None) -> QuadratureResult:
    """∫₀^∞ f(u) ∫_u^∞ g(x) dx du（等于 ζ̃(g, f)）"""
    return _nested(f, g, prec, upper=True, max_levels=max_levels)


def family_f(n: int) -> BesselProduct:
    """f_n = u^n·K₀²·K₁²"""
    return BesselProduct(n, 2, 2)


def family_g(n: int) -> BesselProduct:
    """g_n = u^n·K₀²·K₁·I₁"""
    return BesselProduct(n, 2, 1, 0, 1)


def symmetric_nested(n: int, m: int, prec: Precision,
                     max_levels: Optional[int] = None) -> QuadratureResult:
    """ζ̃(f_n, g_m) + ζ̃(f_m, g_n)"""
    first = nested_moment(family_f(n), family_g(m), prec, max_levels)
    if n == m:
        return first.scaled(2)
    return first.combine(nested_moment(family_f(m), family_g(n), prec, max_levels))


# I_{ρ²α⁶} 各写法中的被积函数
_U3_K0K1SQ = BesselProduct(3, 2, 2)          # u³K₀²K₁²
_U_K0K1SQ = BesselProduct(1, 2, 2)           # uK₀²K₁²
_U_G1 = family_g(1)                          # uK₀²K₁I₁
_U3_G = family_g(3)                          # u³K₀²K₁I₁
_U2_K0K1 = BesselProduct(2, 1, 1)            # u²K₀K₁
_U3_K04K12 = BesselProduct(3, 4, 2)          # u³K₀⁴K₁²
_U_K04 = BesselProduct(1, 4)                 # uK₀⁴
# uK₀·(uK₁)·(uK₁I₀ - uI₁K₀)
_WRONSKIAN_OUTER = BesselSum.of(BesselProduct(3, 1, 2, 1, 0), (-1, BesselProduct(3, 2, 1, 0, 1)))

I_RHO2_FORMS = ("original", "wronskian", "reduced")


def i_rho2_alpha6(prec: Precision, form: str = "original",
                  max_levels: Optional[int] = None) -> QuadratureResult:
    """
    I_{ρ²α⁶} 的三种等价写法

    参数:
        form:
            - original: 原始写法，第二项为 ∫ g(u)∫_u^∞ f
            - wronskian: 用 Wronskian 关系改写后的四项写法
            - reduced: 再把倒数第二项换成简单积分

    异常:
        DomainError: 如果 form 未知
    """
    if form == "original":
        result = nested_moment(_U3_K0K1SQ, _U_G1, prec, max_levels).scaled(8)
        result = result.combine(tail_nested(_WRONSKIAN_OUTER, _U_K0K1SQ, prec, max_levels), -4)
        return result.combine(moment(_U3_K04K12, prec, max_levels))
    if form == "wronskian":
        result = nested_moment(_U3_K0K1SQ, _U_G1, prec, max_levels).scaled(8)
        result = result.combine(nested_moment(_U_K0K1SQ, _U3_G, prec, max_levels), 8)
        result = result.combine(nested_moment(_U_K0K1SQ, _U2_K0K1, prec, max_levels), -4)
        return result.combine(moment(_U3_K04K12, prec, max_levels))
    if form == "reduced":
        result = symmetric_nested(3, 1, prec, max_levels).scaled(8)
        result = result.combine(moment(_U_K04, prec, max_levels), Fraction(2, 3))
        return result.combine(moment(_U3_K04K12, prec, max_levels), -1)
    raise DomainError(f"未知的写法: {form}。支持: {', '.join(I_RHO2_FORMS)}")


def next_to_last_sides(prec: Precision, max_levels: Optional[int] = None) -> Tuple[QuadratureResult, QuadratureResult]:
    """
    倒数第二项的变换两侧：
    -4∫uK₀²K₁²∫₀^u x²K₀K₁ 与 (2/3)∫uK₀⁴ - 2∫u³K₀⁴K₁²
    """
    lhs = nested_moment(_U_K0K1SQ, _U2_K0K1, prec, max_levels).scaled(-4)
    rhs = moment(_U_K04, prec, max_levels).scaled(Fraction(2, 3))
    rhs = rhs.combine(moment(_U3_K04K12, prec, max_levels), -2)
    return lhs, rhs


def i_rho2_alpha6_target(prec: Precision, max_levels: Optional[int] = None) -> QuadratureResult:
    """(1/30)∫uK₀⁶ + (1/20)∫u³K₀⁶ - (31/160)ζ(5)"""
    result = moment(BesselProduct(1, 6), prec, max_levels).scaled(Fraction(1, 30))
    result = result.combine(moment(BesselProduct(3, 6), prec, max_levels), Fraction(1, 20))
    z5 = zeta(5, prec)
    zeta_part = QuadratureResult.build(z5.value, z5.radius, prec.bits, 0, 0)
    return result.combine(zeta_part, Fraction(-31, 160))
