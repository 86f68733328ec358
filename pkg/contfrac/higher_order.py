"""
x(k) = I_{2k,0}^{(κ)} 满足的高阶递推
由约化的 n → n+2 映射符号地消元得到，再用高精度求积值检验残差
"""

import math
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import sympy

from core.config import get_config
from core.errors import DomainError, StructuralError, VerificationError
from core.numbers import BigReal, Precision
from momentalg import generic_reduced_two_step
from quadrature import normalized_moment
from .catalog import ThreeTermRecurrence
from .polynomials import K, IntPoly

logger = logging.getLogger(__name__)

SUPPORTED_KAPPAS = range(3, 9)

# x̃(k) = 8^k·(2k)!·k!·x(k) 的相邻比值，把 κ=4 的递推变成连分数的三项递推
KAPPA4_RESCALING = "8*(2*k+2)*(2*k+1)*(k+1)"


@dataclass(frozen=True)
class HolonomicRecurrence:
    """
    Σ_i coefficients[i](k)·x(k + offset + i) = 0

    属性:
        coefficients: 多项式系数，次序从 x(k+offset) 开始
        offset: 第一项的下标偏移
    """
    coefficients: Tuple[IntPoly, ...]
    offset: int = -1

    def __post_init__(self):
        if len(self.coefficients) < 2:
            raise DomainError("递推至少要有两项")
        if all(c.is_zero for c in self.coefficients):
            raise DomainError("递推的系数不能全为零")

    @classmethod
    def from_exprs(cls, exprs: Sequence[Union[str, sympy.Expr]], offset: int = -1) -> "HolonomicRecurrence":
        return cls(tuple(IntPoly.from_expr(e) for e in exprs), offset)

    @classmethod
    def from_three_term(cls, rec: ThreeTermRecurrence) -> "HolonomicRecurrence":
        """A(k)·y(k-1) - B(k)·y(k) + y(k+1) = 0"""
        return cls((rec.a, -rec.b, IntPoly((1,))), -1)

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def exprs(self) -> List[sympy.Expr]:
        return [c.as_expr() for c in self.coefficients]

    def is_equivalent(self, other: "HolonomicRecurrence") -> bool:
        """两组系数是否只差一个与 k 无关的非零因子"""
        if self.order != other.order or self.offset != other.offset:
            return False
        mine, theirs = self.exprs(), other.exprs()
        for i in range(len(mine)):
            for j in range(i + 1, len(mine)):
                if sympy.expand(mine[i] * theirs[j] - mine[j] * theirs[i]) != 0:
                    return False
        ratios = [sympy.cancel(a / b) for a, b in zip(mine, theirs) if b != 0]
        return bool(ratios) and all(r.is_number and r != 0 for r in ratios)

    def residual(self, k: int, values: Dict[int, BigReal]) -> BigReal:
        """Σ c_i(k)·x(k+offset+i)，values 按下标给出 x"""
        total = None
        for i, coeff in enumerate(self.coefficients):
            term = values[k + self.offset + i] * coeff(k)
            total = term if total is None else total + term
        return total

    def to_dict(self) -> Dict[str, object]:
        return {"offset": self.offset, "coefficients": [c.to_dict() for c in self.coefficients],
                "text": str(self)}

    def __str__(self) -> str:
        parts = []
        for i, c in enumerate(self.coefficients):
            shift = self.offset + i
            index = "k" if shift == 0 else f"k{shift:+d}"
            parts.append(f"({c})·x({index})")
        return " + ".join(parts) + " = 0"


def _normalize(exprs: Sequence[sympy.Expr]) -> List[sympy.Expr]:
    """通分、约去公因式，并使第一项首系数为正"""
    exprs = [sympy.cancel(sympy.together(e)) for e in exprs]
    denominators = [sympy.fraction(e)[1] for e in exprs]
    common = sympy.lcm_list(denominators)
    polys = [sympy.cancel(e * common) for e in exprs]
    divisor = sympy.gcd_list([p for p in polys if p != 0])
    polys = [sympy.expand(sympy.cancel(p / divisor)) for p in polys]
    lead = sympy.Poly(polys[0], K).LC() if polys[0] != 0 else 1
    if lead < 0:
        polys = [-p for p in polys]
    return polys


def _check_kappa(kappa: int) -> None:
    if kappa not in SUPPORTED_KAPPAS:
        raise DomainError(f"κ 必须在 {SUPPORTED_KAPPAS.start}..{SUPPORTED_KAPPAS.stop - 1} 之间，收到: {kappa}")


@lru_cache(maxsize=None)
def derive_recurrence(kappa: int) -> HolonomicRecurrence:
    """
    从约化映射 V(k) = M(k)·V(k+1) 消去 x(k) 以外的分量

    x(k+i) = e₀ᵀ·M(k+i)···M(k+r-1)·V(k+r)，i = 0..r，r+1 个行向量在 r 维空间中线性相关，
    其零空间给出递推系数。结果平移到从 x(k-1) 开始。

    异常:
        DomainError: κ 不在支持范围内
        StructuralError: 零空间为空
    """
    _check_kappa(kappa)
    kept, matrix = generic_reduced_two_step(kappa, 2 * K, 0, sympy.Integer(1))
    m = sympy.Matrix(matrix).applyfunc(sympy.cancel)
    r = len(kept)
    x_row = kept.index(0)
    tail = sympy.eye(r)
    rows = [None] * (r + 1)
    rows[r] = tail.row(x_row)
    for i in reversed(range(r)):
        tail = (m.subs(K, K + i) * tail).applyfunc(sympy.cancel)
        rows[i] = tail.row(x_row)
    system = sympy.Matrix.hstack(*(row.T for row in rows))
    null = system.nullspace(simplify=True)
    if not null:
        raise StructuralError(f"κ={kappa} 的消元方程组没有非零解")
    coeffs = _normalize([c.subs(K, K - 1) for c in null[0]])
    rec = HolonomicRecurrence.from_exprs(coeffs, offset=-1)
    logger.info(f"κ={kappa} 推导出 {rec.order} 阶递推")
    return rec


def first_valid_k(kappa: int) -> int:
    """递推成立的最小 k：偶数 κ 需要 2k >= κ-1 才能使用线性约束"""
    if kappa % 2:
        return 1
    return max(1, math.ceil((kappa - 1) / 2))


_PUBLISHED = {
    4: ("k**4",
        "-(2*k-1)*(2*k+1)*(5*k**2+5*k+2)",
        "16*(2*k-1)*(2*k+1)*(1+k)**2"),
    5: ("8*k**5",
        "-4*(2*k-1)*(35*k**4+70*k**3+63*k**2+28*k+5)",
        "2*(2*k-1)*(1+k)*(1+2*k)*(259*k**2+518*k+285)",
        "-225*(2*k-1)*(1+k)*(1+2*k)*(k+2)*(2*k+3)"),
}


def published_recurrence(kappa: int) -> HolonomicRecurrence:
    """
    κ=4、5 的已知形式（κ=4 的 x(k+1) 系数已订正为 16(2k-1)(2k+1)(1+k)²）

    异常:
        DomainError: 没有已知形式
    """
    if kappa not in _PUBLISHED:
        raise DomainError(f"κ={kappa} 没有已知的递推形式，只有 {sorted(_PUBLISHED)}")
    return HolonomicRecurrence.from_exprs(_PUBLISHED[kappa], offset=-1)


def rescale_recurrence(rec: HolonomicRecurrence, ratio: Union[str, sympy.Expr]) -> HolonomicRecurrence:
    """
    把 x(k) 的递推变为 x̃(k) = g(k)·x(k) 的递推

    参数:
        rec: 原递推
        ratio: ρ(k) = g(k+1)/g(k)，k 的有理函数

    返回:
        通分并约去公因式后的新递推
    """
    rho = sympy.sympify(ratio, locals={"k": K})
    exprs = []
    for i, c in enumerate(rec.exprs()):
        divisor = sympy.Integer(1)
        for t in range(i):
            divisor *= rho.subs(K, K + rec.offset + t)
        exprs.append(c / divisor)
    return HolonomicRecurrence.from_exprs(_normalize(exprs), rec.offset)


@dataclass(frozen=True)
class ResidualCheck:
    k: int
    residual: BigReal
    passed: bool


@dataclass
class HigherOrderReport:
    """
    属性:
        recurrence: 推导出的递推
        published: 已知形式（没有时为 None）
        matches_published: 两者是否等价
        checks: 各 k 的残差
        tolerance: 残差容限
    """
    kappa: int
    recurrence: HolonomicRecurrence
    published: Optional[HolonomicRecurrence]
    matches_published: Optional[bool]
    tolerance: Fraction
    checks: List[ResidualCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return bool(self.checks) and all(c.passed for c in self.checks) and self.matches_published is not False

    def as_dict(self) -> Dict[str, object]:
        return {
            "kappa": self.kappa,
            "recurrence": self.recurrence.to_dict(),
            "published": self.published.to_dict() if self.published else None,
            "matches_published": self.matches_published,
            "tolerance": f"{float(self.tolerance):.1e}",
            "checks": [{"k": c.k, "residual": c.residual.to_decimal(5), "passed": c.passed} for c in self.checks],
            "passed": self.passed,
        }


def higher_order_recurrence(kappa: int, prec: Optional[Precision] = None,
                            k_values: Optional[Sequence[int]] = None,
                            tolerance_digits: Optional[int] = None,
                            max_levels: Optional[int] = None,
                            strict: bool = False) -> HigherOrderReport:
    """
    推导递推，与已知形式比较，并代入求积值检验

    参数:
        kappa: 3..8
        prec: 求积精度，默认取配置
        k_values: 检验的 k，默认从 first_valid_k 开始的四个
        tolerance_digits: 残差容限 10^-tolerance_digits，默认 target_digits - 20
        strict: 为 True 时检验失败抛出 VerificationError

    异常:
        DomainError: κ 不支持，或 k 小于 first_valid_k
        VerificationError: strict 且有残差超限
    """
    prec = prec or Precision(get_config().default_digits)
    rec = derive_recurrence(kappa)
    published = published_recurrence(kappa) if kappa in _PUBLISHED else None
    matches = rec.is_equivalent(published) if published else None
    if matches is False:
        logger.warning(f"κ={kappa} 推导出的递推与已知形式不等价")
    start = first_valid_k(kappa)
    k_values = list(k_values) if k_values is not None else list(range(start, start + 4))
    if any(k < start for k in k_values):
        raise DomainError(f"κ={kappa} 的递推只对 k >= {start} 成立，收到: {k_values}")
    digits = tolerance_digits if tolerance_digits is not None else max(1, prec.target_digits - 20)
    tolerance = Fraction(1, 10 ** digits)
    report = HigherOrderReport(kappa, rec, published, matches, tolerance)

    values: Dict[int, BigReal] = {}
    for k in k_values:
        for i in range(rec.order + 1):
            m = k + rec.offset + i
            if m not in values:
                values[m] = normalized_moment(kappa, 2 * m, 0, prec, max_levels).value
        residual = rec.residual(k, values)
        passed = residual.contains(0, tolerance)
        report.checks.append(ResidualCheck(k, residual, bool(passed)))
        logger.debug(f"κ={kappa}, k={k}: 残差 {residual.to_decimal(5)}")

    logger.info(f"κ={kappa} 高阶递推检验{'通过' if report.passed else '失败'}")
    if strict and not report.passed:
        raise VerificationError(f"κ={kappa} 的高阶递推检验失败", report=report)
    return report
