"""
特殊函数模块
任意精度计算 K₀、K₁、I₀、I₁、ζ(s)、ψ₁(p/q) 与 ψ₀(1)，每个结果都带误差半径
"""

import math
import logging
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Tuple, Union

import mpmath
from mpmath import mp, mpf

from .errors import DomainError, PrecisionError
from .numbers import BigReal, Number, Precision, to_mpf

logger = logging.getLogger(__name__)

LOG2E = 1.0 / math.log(2.0)

# 大参数渐近展开的最小交叉点
ASYMPTOTIC_MIN_X = 25

_MAX_RETRIES = 4


def _check_order(nu: int) -> None:
    if nu not in (0, 1):
        raise DomainError(f"只支持 0 阶和 1 阶 Bessel 函数，收到: {nu}")


def _split_input(x: Number, bits: int) -> Tuple[mpf, mpf]:
    """拆出输入的中心值与误差半径"""
    if isinstance(x, BigReal):
        return to_mpf(x, bits), x.radius
    return to_mpf(x, bits), mpf(0)


def series_bessel(x: mpf, wb: int) -> Tuple[mpf, mpf, mpf, mpf, mpf]:
    """
    以对数幂级数同时求 I₀, I₁, K₀, K₁

    t = x²/4，项 t^k/(k!)²，H_k 为调和数。

    参数:
        x: 正实数
        wb: 工作精度（调用方负责为 K 的抵消预留位数）

    返回:
        (i0, i1, k0, k1, err)，err 为各和式的绝对误差界
    """
    with mp.workprec(wb):
        x = +x
        t = x * x / 4
        gamma = +mp.euler
        eps = mpf(2) ** (-wb)
        term = mpf(1)
        h = mpf(0)
        s_i0 = s_i1 = s_k0 = s_k1 = mpf(0)
        k = 0
        while True:
            h_next = h + mpf(1) / (k + 1)
            s_i0 += term
            s_i1 += term / (k + 1)
            s_k0 += h * term
            s_k1 += (h + h_next - 2 * gamma) * term / (k + 1)
            # k+1 > x 之后相邻项比 < 1/4
            tail = term * (2 * h_next + 3)
            if k + 1 > x and tail < eps * s_i0:
                break
            k += 1
            term = term * t / (k * k)
            h = h_next

        lg = mpmath.log(x / 2)
        i0 = s_i0
        i1 = x / 2 * s_i1
        k0 = -(lg + gamma) * i0 + s_k0
        k1 = 1 / x + lg * i1 - x / 4 * s_k1
        err = (tail + eps * (k + 1) * s_i0) * (abs(lg) + 3) * (x + 1)
        return i0, i1, k0, k1, err


def asymptotic_bessel_k(nu: int, x: mpf, bits: int) -> Optional[Tuple[mpf, mpf]]:
    """
    大参数渐近展开 K_ν(x) ~ √(π/2x)·e^{-x}·Σ a_k/x^k

    返回:
        (value, radius)；如果展开的最小项达不到 2^-bits 的相对精度则返回 None
    """
    with mp.workprec(bits + 20):
        x = +x
        eps = mpf(2) ** (-bits)
        mu = 4 * nu * nu
        term = mpf(1)
        s = mpf(0)
        k = 0
        while True:
            s += term
            k += 1
            nxt = term * (mu - (2 * k - 1) ** 2) / (8 * k * x)
            if abs(nxt) < eps * abs(s):
                bound = 2 * abs(nxt)
                break
            if k > 1 and abs(nxt) >= abs(term):
                return None
            term = nxt
        pref = mpmath.sqrt(mp.pi / (2 * x)) * mpmath.exp(-x)
        return pref * s, pref * (bound + eps * k * abs(s))


def _series_bits(x: mpf, bits: int, for_k: bool) -> int:
    extra = 16 + 2 * math.ceil(math.log2(float(x) + 2))
    if for_k:
        extra += math.ceil(2 * float(x) * LOG2E)
    return bits + extra


def use_asymptotic(x: mpf, bits: int, target_digits: Optional[int] = None) -> bool:
    """判断 K_ν(x) 是否走渐近分支：x 超过交叉点且最小项能满足精度"""
    digits = target_digits if target_digits is not None else bits / 3.33
    xf = float(x)
    return xf >= max(ASYMPTOTIC_MIN_X, 0.7 * digits) and 2 * xf * LOG2E >= bits + 10


def bessel_values(x: mpf, bits: int, need_i: bool = True) -> Tuple[Optional[mpf], Optional[mpf], mpf, mpf]:
    """
    在单个节点上求 (I₀, I₁, K₀, K₁)，相对精度约 2^-bits

    供求积模块在节点上批量调用；need_i=False 且 x 足够大时只算渐近 K。
    """
    if not need_i and use_asymptotic(x, bits):
        k0 = asymptotic_bessel_k(0, x, bits)
        k1 = asymptotic_bessel_k(1, x, bits)
        if k0 is not None and k1 is not None:
            with mp.workprec(bits):
                return None, None, +k0[0], +k1[0]
    i0, i1, k0, k1, _ = series_bessel(x, _series_bits(x, bits, for_k=True))
    with mp.workprec(bits):
        return +i0, +i1, +k0, +k1


def _bessel_k_at(nu: int, xv: mpf, prec: Precision, bits: int) -> Tuple[mpf, mpf]:
    if use_asymptotic(xv, bits, prec.target_digits):
        result = asymptotic_bessel_k(nu, xv, bits)
        if result is not None:
            return result
        logger.debug(f"渐近展开在 x={mpmath.nstr(xv, 8)} 处精度不足，改用级数")
    _, _, k0, k1, err = series_bessel(xv, _series_bits(xv, bits, for_k=True))
    return (k0 if nu == 0 else k1), err


def bessel_k(nu: int, x: Number, prec: Precision) -> BigReal:
    """
    第二类修正 Bessel 函数 K_ν(x)，ν ∈ {0, 1}

    参数:
        nu: 阶数 0 或 1
        x: 正实数
        prec: 精度

    返回:
        误差半径不超过 10^-target_digits 的 BigReal

    异常:
        DomainError: 如果 x <= 0
        PrecisionError: 如果多次提升精度后仍达不到目标
    """
    _check_order(nu)
    bits = prec.bits
    xv, xr = _split_input(x, bits + 20)
    if xv <= 0:
        raise DomainError(f"K_ν 要求 x > 0，收到: {mpmath.nstr(xv, 10)}")
    tol = prec.tolerance
    # K₁ ~ 1/x，小参数处需要额外的位数来保证绝对误差
    if xv < 1:
        bits += math.ceil(-math.log2(float(xv))) + 8
    for attempt in range(_MAX_RETRIES):
        value, radius = _bessel_k_at(nu, xv, prec, bits)
        with mp.workprec(bits):
            if xr:
                if nu == 0:
                    other, _ = _bessel_k_at(1, xv, prec, bits)
                    radius += abs(other) * xr
                else:
                    other, _ = _bessel_k_at(0, xv, prec, bits)
                    radius += (abs(other) + abs(value) / xv) * xr
            radius += abs(value) * mpf(2) ** (1 - bits)
            if radius <= tol or xr:
                return BigReal(+value, radius, bits)
        logger.warning(f"K_{nu} 误差 {mpmath.nstr(radius, 3)} 超出容限，提高精度重试")
        bits *= 2
    raise PrecisionError(f"K_{nu}({mpmath.nstr(xv, 10)}) 无法达到 {prec.target_digits} 位精度",
                         partial=BigReal(value, radius, bits))


def bessel_i(nu: int, x: Number, prec: Precision) -> BigReal:
    """
    第一类修正 Bessel 函数 I_ν(x)，ν ∈ {0, 1}，纯升幂级数

    异常:
        DomainError: 如果 x < 0
    """
    _check_order(nu)
    bits = prec.bits
    xv, xr = _split_input(x, bits + 20)
    if xv < 0:
        raise DomainError(f"I_ν 要求 x >= 0，收到: {mpmath.nstr(xv, 10)}")
    if xv == 0:
        return BigReal(mpf(1) if nu == 0 else mpf(0), mpf(0), bits)
    # I 随 e^x 增长，绝对误差需要额外 x·log₂e 位
    wb = _series_bits(xv, bits + math.ceil(float(xv) * LOG2E), for_k=False)
    i0, i1, _, _, _ = series_bessel(xv, wb)
    with mp.workprec(wb):
        value = i0 if nu == 0 else i1
        # series_bessel 的 err 含有 K 的对数因子，I 只需要和式本身的误差
        radius = abs(value) * mpf(2) ** (8 - wb)
        if xr:
            radius += (i1 if nu == 0 else i0) * xr
        return BigReal(+value, radius, wb)


@lru_cache(maxsize=256)
def _zeta_cached(s: int, bits: int) -> Tuple[mpf, mpf]:
    # Borwein 交错级数加速，d_k 用精确有理数
    n = math.ceil(bits * math.log(2) / math.log(3 + math.sqrt(8))) + 2
    d = []
    term = Fraction(1)
    total = Fraction(0)
    for i in range(n + 1):
        if i > 0:
            term = term * 4 * (n + i - 1) * (n - i + 1) / ((2 * i) * (2 * i - 1))
        total += term
        d.append(total)
    wb = bits + 20
    with mp.workprec(wb):
        dn = mpf(d[n].numerator) / d[n].denominator
        acc = mpf(0)
        for k in range(n):
            dk = mpf(d[k].numerator) / d[k].denominator
            sign = -1 if k % 2 else 1
            acc += sign * (dk - dn) / mpf(k + 1) ** s
        eta = -acc / dn
        factor = 1 - mpf(2) ** (1 - s)
        value = eta / factor
        radius = 3 / (mpf(3 + math.sqrt(8)) ** n) / factor + abs(value) * mpf(2) ** (-bits)
        return value, radius


def zeta(s: int, prec: Precision) -> BigReal:
    """
    Riemann ζ(s)，s 为不小于 2 的整数

    异常:
        DomainError: 如果 s < 2 或 s 不是整数
    """
    if not isinstance(s, int) or s < 2:
        raise DomainError(f"ζ(s) 只支持整数 s >= 2，收到: {s}")
    value, radius = _zeta_cached(s, prec.bits)
    return BigReal(value, radius, prec.bits)


@lru_cache(maxsize=256)
def _polygamma1_cached(p: int, q: int, bits: int) -> Tuple[mpf, mpf]:
    digits = bits * math.log10(2)
    n_terms = math.ceil(digits * math.log(10) / (2 * math.pi)) + 2
    wb = bits + 20
    with mp.workprec(wb):
        z = mpf(p) / q
        eps = mpf(2) ** (-bits)
        direct = mpf(0)
        for k in range(n_terms):
            direct += 1 / (z + k) ** 2
        # Euler-Maclaurin 尾部
        w = z + n_terms
        tail = 1 / w + 1 / (2 * w * w)
        prev = None
        j = 1
        while True:
            t = mpmath.bernoulli(2 * j) / w ** (2 * j + 1)
            if abs(t) < eps * tail or (prev is not None and abs(t) > prev):
                bound = 2 * abs(t)
                break
            tail += t
            prev = abs(t)
            j += 1
        value = direct + tail
        return value, bound + abs(value) * mpf(2) ** (-bits)


def polygamma1(z: Union[Fraction, int], prec: Precision) -> BigReal:
    """
    三伽马函数 ψ₁(z)，z 为正有理数

    异常:
        DomainError: 如果 z <= 0
    """
    z = Fraction(z)
    if z <= 0:
        raise DomainError(f"ψ₁(z) 要求 z > 0，收到: {z}")
    value, radius = _polygamma1_cached(z.numerator, z.denominator, prec.bits)
    return BigReal(value, radius, prec.bits)


def digamma_at_one(prec: Precision) -> BigReal:
    """ψ₀(1) = -γ"""
    bits = prec.bits
    with mp.workprec(bits + 10):
        value = -mp.euler
    return BigReal(value, abs(value) * mpf(2) ** (-bits), bits)


def pi_value(prec: Precision) -> BigReal:
    """π，供闭式目标求值"""
    bits = prec.bits
    with mp.workprec(bits + 10):
        value = +mp.pi
    return BigReal(value, value * mpf(2) ** (-bits), bits)
