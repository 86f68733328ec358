"""
周期表示的被积函数
单纯形上的有理被积函数（u 幂次 1 与 3，以及含 I₀ 的混合形式）和降一维的对数核形式

记号：单纯形 {aᵢ > 0, Σaᵢ < 1}，r = 1 - Σaᵢ 由调用方精确给出（求积节点上保留靠近 1 的信息）。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

import numpy as np
import mpmath
from mpmath import mp, mpf

from core.errors import DomainError, SingularPointError
from core.numbers import BigReal, Number, Precision, to_mpf
from quadrature import BesselProduct
from .symmetric import elementary

RAW_SIMPLEX = "raw_simplex"
LOG_KERNEL = "log_kernel"
MIXED_I0 = "mixed_I0"
FORMS = (RAW_SIMPLEX, LOG_KERNEL, MIXED_I0)

# X 小于该值时对数核用级数，避免 (1+X²)/(2X)·L - 1 的抵消
_SERIES_CUTOFF = 0.125
_ARRAY_SERIES_TERMS = 10


@dataclass(frozen=True)
class PeriodSpec:
    """
    一个周期表示

    参数:
        n: K₀ 的幂次（>= 3）
        p: u 的幂次，1 或 3
        form: raw_simplex、log_kernel 或 mixed_I0（仅 p=1）

    异常:
        DomainError: 参数不合法
    """
    n: int
    p: int = 1
    form: str = RAW_SIMPLEX

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise DomainError(f"n 必须是不小于 3 的整数，收到: {self.n!r}")
        if self.p not in (1, 3):
            raise DomainError(f"p 只能是 1 或 3，收到: {self.p!r}")
        if self.form not in FORMS:
            raise DomainError(f"未知的表示形式: {self.form}（支持: {', '.join(FORMS)}）")
        if self.form == MIXED_I0 and self.p != 1:
            raise DomainError("mixed_I0 只有 p=1 的形式")

    @property
    def dimension(self) -> int:
        """积分维数：单纯形形式 n-1，对数核形式 n-2"""
        return self.n - 2 if self.form == LOG_KERNEL else self.n - 1

    @property
    def normalization(self) -> Fraction:
        """矩积分 = normalization × 周期积分"""
        return Fraction(1, 2 ** (self.n - 1 if self.p == 1 else self.n - 3))

    @property
    def product(self) -> BesselProduct:
        """对应的 Bessel 矩"""
        if self.form == MIXED_I0:
            return BesselProduct(1, self.n, 0, 1)
        return BesselProduct(self.p, self.n)

    @property
    def label(self) -> str:
        return f"{self.form}(n={self.n}, p={self.p})"


def _simplex_formula(spec: PeriodSpec, u, v, w, r):
    if spec.form == MIXED_I0:
        return 1 / (w * u + r * v)
    den = w + r * v
    if spec.p == 1:
        return 1 / den
    return w * r / (den * den)


def simplex_point(spec: PeriodSpec, a: Sequence, r, one):
    """
    单纯形被积函数在一点的值（mpf 或 numpy 数组按列给出）

    参数:
        a: 各坐标
        r: 1 - Σaᵢ
        one: 该数值类型的 1
    """
    u, v, w = elementary(a, one)
    return _simplex_formula(spec, u, v, w, r)


def _check_simplex_point(values: Sequence, dimension: int) -> None:
    if len(values) != dimension:
        raise DomainError(f"需要 {dimension} 个坐标，收到 {len(values)} 个")
    if any(x <= 0 for x in values) or sum(values) >= 1:
        raise SingularPointError(f"点 {tuple(str(x) for x in values)} 不在单纯形内部")


def simplex_integrand(spec: PeriodSpec, a: Sequence[Number], bits: int = 256) -> BigReal:
    """
    单纯形形式的被积函数值

    参数:
        spec: raw_simplex 或 mixed_I0 形式
        a: 单纯形内部的点；全为有理数时精确计算
        bits: 输出精度

    返回:
        被积函数值

    异常:
        DomainError: spec 是对数核形式或坐标个数不符
        SingularPointError: 点在单纯形边界或外部
    """
    if spec.form == LOG_KERNEL:
        raise DomainError("对数核形式请用 log_kernel_integrand")
    if all(isinstance(x, (int, Fraction)) for x in a):
        exact = [Fraction(x) for x in a]
        _check_simplex_point(exact, spec.dimension)
        return BigReal.exact(simplex_point(spec, exact, 1 - sum(exact), Fraction(1)), bits)
    values = [BigReal.coerce(x, bits) for x in a]
    _check_simplex_point([x.value for x in values], spec.dimension)
    one = BigReal.exact(1, bits)
    u = values[0]
    for x in values[1:]:
        u = u + x
    return simplex_point(spec, values, one - u, one)


def _log_parts(x: mpf, r: mpf) -> Tuple[mpf, mpf]:
    """
    L = log((1+x)/(1-x)) 与 F = (1+x²)/(2x)·L - 1

    小 x 时 L/(2x) = Σ x^{2k}/(2k+1)，F = Σ_{k>=1} x^{2k}·4k/(4k²-1)。
    """
    if x >= _SERIES_CUTOFF:
        L = mpmath.log1p(x) - mpmath.log(r)
        return L, (1 + x * x) / (2 * x) * L - 1
    eps = mpf(2) ** (-mp.prec)
    x2 = x * x
    power = mpf(1)
    s = mpf(1)
    f = mpf(0)
    k = 0
    while True:
        k += 1
        power *= x2
        term = power / (2 * k + 1)
        s += term
        f += 4 * k * power / (4 * k * k - 1)
        if term < eps:
            break
    return 2 * x * s, f


def _log_parts_array(x: np.ndarray, r: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    small = x < _SERIES_CUTOFF
    safe = np.where(small, 0.5, x)
    L = np.log1p(x) - np.log(r)
    f = (1 + safe * safe) / (2 * safe) * L - 1
    x2 = x * x
    power = np.ones_like(x)
    f_series = np.zeros_like(x)
    for k in range(1, _ARRAY_SERIES_TERMS + 1):
        power = power * x2
        f_series += 4 * k * power / (4 * k * k - 1)
    return L, np.where(small, f_series, f)


def log_kernel_point(spec: PeriodSpec, x: Sequence, r, one):
    """对数核被积函数在一点的值（mpf 或 numpy 数组按列给出）"""
    X, v, w = elementary(x, one)
    if isinstance(X, np.ndarray):
        L, F = _log_parts_array(X, r)
    else:
        L, F = _log_parts(X, r)
    den = 4 * X * w + r * (1 + X) * v
    if spec.p == 1:
        return 4 * L / den
    return 4 * F * w * r * (1 + X) / (den * den)


def log_kernel_integrand(spec: PeriodSpec, x: Sequence[Number], prec: Precision) -> BigReal:
    """
    对数核形式的被积函数值

    参数:
        spec: log_kernel 形式
        x: 点（n-2 个正坐标，Σxᵢ < 1）
        prec: 精度

    返回:
        被积函数值（在保护位精度下计算）

    异常:
        DomainError: spec 不是对数核形式、坐标个数不符、坐标为负或 Σxᵢ >= 1
        SingularPointError: 某个坐标为 0
    """
    if spec.form != LOG_KERNEL:
        raise DomainError(f"{spec.label} 不是对数核形式")
    if len(x) != spec.dimension:
        raise DomainError(f"需要 {spec.dimension} 个坐标，收到 {len(x)} 个")
    bits = prec.bits
    with mp.workprec(bits + 20):
        xs = [to_mpf(xi, bits + 20) for xi in x]
        if any(xi < 0 for xi in xs):
            raise DomainError("坐标必须为正")
        total = mpmath.fsum(xs)
        if total >= 1:
            raise DomainError(f"Σxᵢ = {mpmath.nstr(total, 10)} >= 1，不在积分区域内")
        if any(xi == 0 for xi in xs):
            raise SingularPointError("点在区域边界上")
        r = 1 - total
        value = log_kernel_point(spec, xs, r, mpf(1))
    with mp.workprec(bits):
        value = +value
        return BigReal(value, abs(value) * mpf(2) ** (-bits), bits)


def appendix_identity_point(x: mpf, xc: mpf) -> mpf:
    """(1/x)·L² - 4·((1-x²)/x)·F²，两项在 x→0 处均有界"""
    L, F = _log_parts(x, xc)
    return L * L / x - 4 * xc * (1 + x) / x * F * F
