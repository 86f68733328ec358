"""
两步递推的渐近谱
n → ∞ 时两步递推系数（偶数 j 子族）的极限矩阵，由 sympy 从 two_step_coeffs 推导，特征值为 κ², (κ-2)², ...
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple

import numpy as np
import sympy

from core.errors import DomainError, StructuralError
from .recurrences import _two_step_rows, generic_reduced_two_step

logger = logging.getLogger(__name__)

_N = sympy.Symbol("n", positive=True)


@dataclass(frozen=True)
class AsymptoticSpectrum:
    """
    属性:
        kappa: Bessel 权重
        indices: 所用子族的 j（偶数 j）
        matrix: 极限矩阵
        reduced_indices: 偶数 κ 消去 j = κ-2 之后保留的 j
        eigenvalues: 约化极限矩阵的精确特征值（按重数展开），降序
        numeric_eigenvalues: numpy 数值特征值（完整极限矩阵），降序
        ones_certificate: 全 1 向量是否为 κ² 的特征向量
        squares_certificate: 精确特征值是否恰为 κ², (κ-2)², ... 中的非零项
    """
    kappa: int
    indices: List[int]
    matrix: List[List[Fraction]]
    reduced_indices: List[int]
    eigenvalues: List[Fraction]
    numeric_eigenvalues: List[float]
    ones_certificate: bool
    squares_certificate: bool


def _to_fraction(x: sympy.Expr) -> Fraction:
    if not x.is_Rational:
        raise StructuralError(f"极限不是有理数: {x}")
    return Fraction(int(x.p), int(x.q))


def _limit_matrix(matrix) -> List[List[Fraction]]:
    return [[_to_fraction(sympy.limit(sympy.cancel(entry), _N, sympy.oo)) for entry in row] for row in matrix]


@lru_cache(maxsize=32)
def _derived(kappa: int) -> Tuple[Tuple[int, ...], tuple, Tuple[int, ...], tuple]:
    one = sympy.Integer(1)
    js = list(range(0, kappa + 1, 2))
    full = _limit_matrix(_two_step_rows(kappa, _N, js, js, one))
    kept, reduced = generic_reduced_two_step(kappa, _N, 0, one)
    return tuple(js), tuple(map(tuple, full)), tuple(kept), tuple(map(tuple, _limit_matrix(reduced)))


def limiting_matrix(kappa: int, reduced: bool = False) -> List[List[Fraction]]:
    """
    两步递推系数在 n → ∞ 时的极限（偶数 j 子族）

    参数:
        reduced: 为 True 时先用偶数 κ 的线性约束消去 j = κ-2，再取极限

    异常:
        DomainError: κ < 1
    """
    if kappa < 1:
        raise DomainError(f"κ 必须 >= 1，收到: {kappa}")
    _, full, _, small = _derived(kappa)
    return [list(row) for row in (small if reduced else full)]


def _exact_eigenvalues(matrix: List[List[Fraction]]) -> List[Fraction]:
    symbolic = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in matrix])
    values = []
    for value, multiplicity in symbolic.eigenvals().items():
        values += [_to_fraction(sympy.nsimplify(value))] * multiplicity
    return sorted(values, reverse=True)


def asymptotic_eigenvalues(kappa: int) -> AsymptoticSpectrum:
    """
    约化极限矩阵的精确特征值，以 numpy 数值特征值、全 1 向量和 κ², (κ-2)², ... 交叉验证

    异常:
        DomainError: κ < 1
    """
    if kappa < 1:
        raise DomainError(f"κ 必须 >= 1，收到: {kappa}")
    js, full, kept, small = _derived(kappa)
    matrix = [list(row) for row in full]
    exact = _exact_eigenvalues([list(row) for row in small])
    numeric = sorted(np.linalg.eigvals(np.array(matrix, dtype=float)).real.tolist(), reverse=True)
    ones = all(sum(row) == kappa ** 2 for row in matrix)
    squares = [(kappa - 2 * i) ** 2 for i in range(len(js))]
    squares_ok = exact == [s for s in squares if s != 0]
    if not squares_ok:
        logger.error(f"κ={kappa} 渐近特征值 {exact} 与 κ², (κ-2)², ... 不符")
    logger.debug(f"κ={kappa} 渐近特征值: {exact}（数值 {numeric}）")
    return AsymptoticSpectrum(kappa, list(js), matrix, list(kept), exact, numeric, ones, squares_ok)
