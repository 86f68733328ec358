"""
I_{n,j}^{(κ)} 的递推关系
一步递推 I_{n,·} = M(n)·I_{n+1,·}、偶数 κ 的线性约束、保持奇偶性的 n → n+2 两步递推
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from core.errors import DomainError, StructuralError
from .linalg import Matrix


@dataclass(frozen=True)
class MomentIndex:
    """
    归一化矩 I_{n,j}^{(κ)} = (1/n!)∫u^{n+1}K₀^{κ-j}K₁^j 的指标

    异常:
        DomainError: κ < 1，j 不在 [0, κ]，或 n < max(0, j-1)
    """
    kappa: int
    n: int
    j: int

    def __post_init__(self):
        if self.kappa < 1:
            raise DomainError(f"κ 必须 >= 1，收到: {self.kappa}")
        if not 0 <= self.j <= self.kappa:
            raise DomainError(f"j 必须满足 0 <= j <= κ={self.kappa}，收到: {self.j}")
        if self.n < 0 or self.n < self.j - 1:
            raise DomainError(f"n 必须满足 n >= max(0, j-1)，收到: n={self.n}, j={self.j}")

    @property
    def parity(self) -> int:
        """(n-j) mod 2"""
        return (self.n - self.j) % 2

    def __str__(self) -> str:
        return f"I[{self.n},{self.j}]^({self.kappa})"


def _step_entry(kappa: int, n: int, j: int, target: int) -> Fraction:
    den = n - j + 2
    if den == 0:
        raise StructuralError(f"κ={kappa}, n={n} 第 {j} 行的分母 n-j+2 为零")
    if target == j - 1:
        return Fraction((n + 1) * j, den)
    if target == j + 1:
        return Fraction((n + 1) * (kappa - j), den)
    return Fraction(0)


def step_matrix(kappa: int, n: int) -> Matrix:
    """
    (κ+1)×(κ+1) 矩阵 M，使 I_{n,·} = M·I_{n+1,·}

    I_{n,j} = (n+1)/(n-j+2)·[j·I_{n+1,j-1} + (κ-j)·I_{n+1,j+1}]

    异常:
        StructuralError: 某行分母 n-j+2 为零（n <= κ-2）
    """
    if kappa < 1:
        raise DomainError(f"κ 必须 >= 1，收到: {kappa}")
    size = kappa + 1
    matrix = [[Fraction(0)] * size for _ in range(size)]
    for j in range(size):
        for target in (j - 1, j + 1):
            if 0 <= target < size:
                matrix[j][target] = _step_entry(kappa, n, j, target)
            elif n - j + 2 == 0:
                raise StructuralError(f"κ={kappa}, n={n} 第 {j} 行的分母 n-j+2 为零")
    return matrix


def class_indices(kappa: int, n: int) -> List[int]:
    """(n-j) 为偶数且 I_{n,j} 有限的 j"""
    return [j for j in range(n % 2, min(kappa, n) + 1, 2)]


def class_step_matrix(kappa: int, n: int) -> Matrix:
    """
    一步递推限制在 (n-j) 为偶数的子族上：行取 class_indices(κ, n)，列取 class_indices(κ, n+1)

    对 n < κ-1 同样有效（只用到有限的矩）。
    """
    rows = class_indices(kappa, n)
    cols = class_indices(kappa, n + 1)
    return [[_step_entry(kappa, n, j, c) if abs(c - j) == 1 else Fraction(0) for c in cols]
            for j in rows]


def even_constraint(kappa: int, n, one=Fraction(1)) -> Dict[int, object]:
    """
    偶数 κ 的线性约束 Σ_l (-1)^l·(n-2l+2)·C(κ/2, l)·I_{n,2l} = 0

    参数:
        n: 整数层号，或符号（此时跳过 n >= κ-1 的检查）
        one: 系数所在域的单位元（Fraction(1) 或 sympy 的 1）

    返回:
        {j: 系数}，j = 0, 2, ..., κ

    异常:
        DomainError: κ 为奇数或 n < κ-1
    """
    if kappa % 2:
        raise DomainError(f"线性约束只对偶数 κ 成立，收到 κ={kappa}")
    if isinstance(n, int) and n < kappa - 1:
        raise DomainError(f"线性约束要求 n >= κ-1={kappa - 1}，收到 n={n}")
    half = kappa // 2
    return {2 * l: one * (-1) ** l * (n - 2 * l + 2) * math.comb(half, l) for l in range(half + 1)}


def two_step_coeffs(kappa: int, n, j: int, one=Fraction(1)) -> Tuple:
    """
    I_{n,j} = c₋·I_{n+2,j-2} + c₀·I_{n+2,j} + c₊·I_{n+2,j+2}

    异常:
        StructuralError: 分母 n-j+2 或 n-j+4 为零
    """
    d2 = n - j + 2
    d4 = n - j + 4
    if isinstance(n, int) and (d2 == 0 or d4 == 0):
        raise StructuralError(f"κ={kappa}, n={n}, j={j} 的两步递推分母为零")
    scale = one * (n + 1) * (n + 2)
    minus = scale * j * (j - 1) / (d2 * d4)
    center = scale / d2 * (one * j * (kappa - j + 1) / d4 + one * (kappa - j) * (j + 1) / d2)
    plus = scale * (kappa - j) * (kappa - j - 1) / (d2 * d2)
    return minus, center, plus


def _two_step_rows(kappa: int, n, rows: List[int], cols: List[int], one) -> Matrix:
    position = {c: i for i, c in enumerate(cols)}
    matrix = [[one * 0] * len(cols) for _ in rows]
    for r, j in enumerate(rows):
        for target, coeff in zip((j - 2, j, j + 2), two_step_coeffs(kappa, n, j, one)):
            if coeff != 0:
                if target not in position:
                    raise StructuralError(f"两步递推越出子族: I[{n + 2},{target}]")
                matrix[r][position[target]] = coeff
    return matrix


def two_step_matrix(kappa: int, n: int) -> Matrix:
    """两步递推在子族上的矩阵，行列都取 class_indices（n 与 n+2 的 j 集合）"""
    return _two_step_rows(kappa, n, class_indices(kappa, n), class_indices(kappa, n + 2), Fraction(1))


def eliminated_index(kappa: int, n: int) -> Optional[int]:
    """偶数 κ、偶数 n 时用线性约束消去的 j（κ-2），其余情况为 None"""
    if kappa % 2 == 0 and n % 2 == 0 and kappa >= 2 and n >= kappa - 1:
        return kappa - 2
    return None


def _eliminate_column(kappa: int, n, rows: List[int], cols: List[int], full: Matrix,
                      drop: int, one) -> Tuple[List[int], Matrix]:
    constraint = even_constraint(kappa, n + 2, one)
    pivot = constraint[drop]
    # I_{n+2,drop} = -Σ_{j≠drop} c_j/c_drop·I_{n+2,j}
    substitute = {j: -coeff / pivot for j, coeff in constraint.items() if j != drop}
    kept = [j for j in cols if j != drop]
    drop_col = cols.index(drop)
    reduced = []
    for r, j in enumerate(rows):
        if j == drop:
            continue
        row = full[r]
        reduced.append([row[cols.index(c)] + row[drop_col] * substitute.get(c, 0) for c in kept])
    return kept, reduced


def reduced_two_step(kappa: int, n: int) -> Tuple[List[int], Matrix]:
    """
    约化的 n → n+2 映射

    偶数 κ、偶数 n 时在 n+2 层用线性约束消去 I_{n+2,κ-2}，并去掉 n 层对应的行；
    其余情况即 two_step_matrix。

    返回:
        (保留的 j, 矩阵)
    """
    rows = class_indices(kappa, n)
    cols = class_indices(kappa, n + 2)
    full = _two_step_rows(kappa, n, rows, cols, Fraction(1))
    if eliminated_index(kappa, n) is None or eliminated_index(kappa, n + 2) is None:
        return rows, full
    return _eliminate_column(kappa, n, rows, cols, full, kappa - 2, Fraction(1))


def generic_reduced_two_step(kappa: int, n, parity: int, one) -> Tuple[List[int], Matrix]:
    """
    n 充分大时的约化映射，n 可以是符号

    参数:
        parity: n 的奇偶性
        one: 系数域的单位元

    返回:
        (保留的 j, 矩阵)，行与列使用同一组 j
    """
    js = list(range(parity, kappa + 1, 2))
    full = _two_step_rows(kappa, n, js, js, one)
    if kappa % 2 == 0 and parity == 0 and kappa >= 2:
        return _eliminate_column(kappa, n, js, js, full, kappa - 2, one)
    return js, full
