"""
矩的基底分解
把 (n-j) 为偶数的 I_{n,j}^{(κ)} 精确地写成 1 与 ∫u^m·K₀^κ（m 为奇数）的有理线性组合
"""

import math
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from core.closed_form import Expr, Rational, Symbol
from core.errors import UnsupportedSubfamilyError
from core.numbers import BigReal, Precision
from quadrature import BesselProduct, moment
from . import linalg
from .recurrences import MomentIndex, class_indices, class_step_matrix, even_constraint

logger = logging.getLogger(__name__)

# 符号向量：第 0 个分量是常数 1 的系数，其余依次是各基底元素的系数
SymVec = Tuple[Fraction, ...]


def basis_exponents(kappa: int) -> List[int]:
    """基底 ∫u^m·K₀^κ 的 m：κ 偶数时 1, 3, ..., κ-3；κ 奇数时 1, 3, ..., κ-2"""
    top = kappa - 3 if kappa % 2 == 0 else kappa - 2
    return list(range(1, top + 1, 2))


def basis_product(kappa: int, m: int) -> BesselProduct:
    return BesselProduct(m, kappa)


@dataclass(frozen=True)
class BasisDecomposition:
    """
    coeff_one·1 + Σ coeffs[m]·∫u^m·K₀^κ

    属性:
        kappa: Bessel 权重
        coeff_one: 常数项
        coeffs: (m, 系数) 按 m 升序
    """
    kappa: int
    coeff_one: Fraction
    coeffs: Tuple[Tuple[int, Fraction], ...]

    @classmethod
    def from_vector(cls, kappa: int, vector: SymVec) -> "BasisDecomposition":
        return cls(kappa, vector[0], tuple(zip(basis_exponents(kappa), vector[1:])))

    @property
    def is_rational(self) -> bool:
        return all(c == 0 for _, c in self.coeffs)

    def coefficient(self, m: int) -> Fraction:
        return dict(self.coeffs).get(m, Fraction(0))

    def scaled(self, factor) -> "BasisDecomposition":
        factor = Fraction(factor)
        return BasisDecomposition(self.kappa, self.coeff_one * factor,
                                  tuple((m, c * factor) for m, c in self.coeffs))

    def to_closed_form(self) -> Expr:
        """以 moment(m, κ) 符号表示的闭式表达式"""
        expr: Expr = Rational(self.coeff_one)
        for m, c in self.coeffs:
            if c:
                expr = expr + c * Symbol("moment", (Fraction(m), Fraction(self.kappa)))
        return expr

    def as_dict(self) -> Dict[str, object]:
        return {
            "kappa": self.kappa,
            "one": str(self.coeff_one),
            "basis": {f"m{m}": str(c) for m, c in self.coeffs},
        }

    def __str__(self) -> str:
        parts = [str(self.coeff_one)]
        parts += [f"({c})*∫u^{m}K0^{self.kappa}" for m, c in self.coeffs if c]
        return " + ".join(parts)


def _symbol(kappa: int, m: Optional[int] = None, value: Fraction = Fraction(1)) -> SymVec:
    """常数（m=None）或基底元素 m 乘以 value"""
    size = 1 + len(basis_exponents(kappa))
    vec = [Fraction(0)] * size
    index = 0 if m is None else 1 + basis_exponents(kappa).index(m)
    vec[index] = Fraction(value)
    return tuple(vec)


def _combine(terms, size: int) -> List[Fraction]:
    total = [Fraction(0)] * size
    for coeff, vec in terms:
        if coeff:
            for i, x in enumerate(vec):
                total[i] += coeff * x
    return total


@lru_cache(maxsize=None)
def _seed(kappa: int) -> Dict[int, Dict[int, SymVec]]:
    """
    n <= κ-1 各层的符号向量

    在 κ-1 层设未知数（I_{κ-1,κ-1} = 1/κ! 已知），向下用一步递推走到基底所在的层，
    由 I_{m-1,0} = ∫u^m·K₀^κ/(m-1)! 解出未知数。
    """
    top = kappa - 1
    sym_size = 1 + len(basis_exponents(kappa))
    seed_js = class_indices(kappa, top)
    unknown_js = [j for j in seed_js if j != top]
    r = len(unknown_js)

    # 仿射值: (未知数系数, 符号常数)
    def affine_known(vec):
        return [Fraction(0)] * r, list(vec)

    levels_affine: Dict[int, Dict[int, Tuple[List[Fraction], List[Fraction]]]] = {top: {}}
    for j in seed_js:
        if j == top:
            levels_affine[top][j] = affine_known(_symbol(kappa, value=Fraction(1, math.factorial(kappa))))
        else:
            unit = [Fraction(0)] * r
            unit[unknown_js.index(j)] = Fraction(1)
            levels_affine[top][j] = (unit, [Fraction(0)] * sym_size)

    for n in range(top - 1, -1, -1):
        matrix = class_step_matrix(kappa, n)
        cols = class_indices(kappa, n + 1)
        upper = levels_affine[n + 1]
        levels_affine[n] = {}
        for row, j in zip(matrix, class_indices(kappa, n)):
            coeffs = _combine(((c, upper[col][0]) for c, col in zip(row, cols)), r)
            const = _combine(((c, upper[col][1]) for c, col in zip(row, cols)), sym_size)
            levels_affine[n][j] = (coeffs, const)

    solution: List[List[Fraction]] = []
    if r:
        a_rows, b_rows = [], []
        for m in basis_exponents(kappa):
            coeffs, const = levels_affine[m - 1][0]
            target = _symbol(kappa, m, Fraction(1, math.factorial(m - 1)))
            a_rows.append(coeffs)
            b_rows.append([t - c for t, c in zip(target, const)])
        solution = linalg.solve(a_rows, b_rows)

    levels: Dict[int, Dict[int, SymVec]] = {}
    for n, entries in levels_affine.items():
        levels[n] = {}
        for j, (coeffs, const) in entries.items():
            vec = list(const)
            for k, c in enumerate(coeffs):
                if c:
                    vec = [v + c * s for v, s in zip(vec, solution[k])]
            levels[n][j] = tuple(vec)
    logger.debug(f"κ={kappa} 的种子层求解完成（{r} 个未知数）")
    return levels


@lru_cache(maxsize=None)
def _level(kappa: int, n: int) -> Dict[int, SymVec]:
    """第 n 层子族的符号向量"""
    if n <= kappa - 1:
        return _seed(kappa)[n]
    lower = _level(kappa, n - 1)
    cols = class_indices(kappa, n)
    a_rows = [list(row) for row in class_step_matrix(kappa, n - 1)]
    b_rows = [list(lower[j]) for j in class_indices(kappa, n - 1)]
    if kappa % 2 == 0 and n % 2 == 0:
        constraint = even_constraint(kappa, n)
        a_rows.append([constraint.get(j, Fraction(0)) for j in cols])
        b_rows.append([Fraction(0)] * (1 + len(basis_exponents(kappa))))
    solution = linalg.solve(a_rows, b_rows)
    return {j: tuple(row) for j, row in zip(cols, solution)}


def decompose(idx: MomentIndex) -> BasisDecomposition:
    """
    I_{n,j}^{(κ)} 在基底 {1} ∪ {∫u^m·K₀^κ} 上的精确坐标

    异常:
        UnsupportedSubfamilyError: (n-j) 为奇数
        StructuralError: 精确求解时出现秩亏或不相容
    """
    if idx.parity:
        raise UnsupportedSubfamilyError(f"{idx}: 只支持 (n-j) 为偶数的子族")
    return BasisDecomposition.from_vector(idx.kappa, _level(idx.kappa, idx.n)[idx.j])


def decompose_product(f: BesselProduct) -> BasisDecomposition:
    """
    ∫u^p·K₀^a·K₁^b 的基底分解（= (p-1)!·I_{p-1,b}^{(a+b)}）

    异常:
        UnsupportedSubfamilyError: 含 I₀/I₁，p = 0，或 (p-1-b) 为奇数
    """
    if f.needs_i:
        raise UnsupportedSubfamilyError(f"{f}: 含 I 型 Bessel 函数的积分不在此族内")
    if f.p == 0:
        raise UnsupportedSubfamilyError(f"{f}: 需要 u 的幂次 >= 1")
    idx = MomentIndex(f.a + f.b, f.p - 1, f.b)
    return decompose(idx).scaled(math.factorial(idx.n))


def basis_value(decomposition: BasisDecomposition, prec: Precision,
                max_levels: Optional[int] = None) -> BigReal:
    """用基底积分的求积值计算分解的数值"""
    total = BigReal.exact(decomposition.coeff_one, prec.bits)
    for m, c in decomposition.coeffs:
        if c:
            total = total + moment(basis_product(decomposition.kappa, m), prec, max_levels).value * c
    return total
