"""
有理数精确线性代数
Bareiss 无分数消元：行列式、秩、带一致性检查的矩形方程组求解
"""

import math
from fractions import Fraction
from typing import List, Sequence, Tuple

from core.errors import StructuralError

Matrix = List[List[Fraction]]


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def identity(n: int) -> Matrix:
    return [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]


def matmul(a: Matrix, b: Matrix) -> Matrix:
    if a and len(a[0]) != len(b):
        raise StructuralError(f"矩阵维数不匹配: {len(a)}×{len(a[0])} 与 {len(b)}×{len(b[0]) if b else 0}")
    cols = len(b[0]) if b else 0
    return [[sum((row[k] * b[k][c] for k in range(len(b))), Fraction(0)) for c in range(cols)]
            for row in a]


def vecmat(v: Sequence[Fraction], a: Matrix) -> List[Fraction]:
    """行向量左乘矩阵 v·A"""
    cols = len(a[0]) if a else 0
    return [sum((v[i] * a[i][c] for i in range(len(a))), Fraction(0)) for c in range(cols)]


def _integer_rows(a: Matrix, b: Matrix) -> Tuple[List[List[int]], List[int]]:
    """每行乘以分母的最小公倍数，化为整数行 [A | B]"""
    rows, scales = [], []
    for row_a, row_b in zip(a, b):
        row = [Fraction(x) for x in list(row_a) + list(row_b)]
        scale = 1
        for x in row:
            scale = math.lcm(scale, x.denominator)
        rows.append([int(x * scale) for x in row])
        scales.append(scale)
    return rows, scales


def _bareiss(m: List[List[int]], cols: int) -> Tuple[List[int], int]:
    """
    Bareiss 无分数消元，原地化为行阶梯形，只在前 cols 列上选主元

    每一步的除法都是整除（中间量都是原矩阵的子式）。

    返回:
        (主元列, 行交换次数)
    """
    rows = len(m)
    width = len(m[0]) if m else 0
    pivots: List[int] = []
    swaps = 0
    previous = 1
    r = 0
    for c in range(cols):
        if r == rows:
            break
        pivot = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            m[r], m[pivot] = m[pivot], m[r]
            swaps += 1
        head = m[r][c]
        for i in range(r + 1, rows):
            factor = m[i][c]
            for k in range(c + 1, width):
                q, rem = divmod(head * m[i][k] - factor * m[r][k], previous)
                if rem:
                    raise StructuralError(f"Bareiss 消元出现非整除: 第 {i} 行第 {k} 列")
                m[i][k] = q
            m[i][c] = 0
        previous = head
        pivots.append(c)
        r += 1
    return pivots, swaps


def rank(a: Matrix) -> int:
    m, _ = _integer_rows(a, [[] for _ in a])
    pivots, _ = _bareiss(m, len(a[0]) if a else 0)
    return len(pivots)


def determinant(a: Matrix) -> Fraction:
    """方阵的行列式（Bareiss 消元的最后一个主元，再除去各行的缩放因子）"""
    n = len(a)
    if any(len(row) != n for row in a):
        raise StructuralError("行列式需要方阵")
    if n == 0:
        return Fraction(1)
    m, scales = _integer_rows(a, [[] for _ in a])
    pivots, swaps = _bareiss(m, n)
    if len(pivots) < n:
        return Fraction(0)
    det = Fraction(m[n - 1][n - 1], math.prod(scales))
    return -det if swaps % 2 else det


def solve(a: Matrix, b: Matrix) -> Matrix:
    """
    求解 A·X = B（A 为 m×r，B 为 m×c），允许 m > r

    前向用 Bareiss 无分数消元，回代在 Fraction 上进行。

    异常:
        StructuralError: A 列不满秩，或方程组不相容
    """
    if len(a) != len(b):
        raise StructuralError(f"方程数不匹配: A 有 {len(a)} 行，B 有 {len(b)} 行")
    unknowns = len(a[0]) if a else 0
    m, _ = _integer_rows(a, b)
    pivots, _ = _bareiss(m, unknowns)
    if len(pivots) < unknowns:
        raise StructuralError(f"方程组欠定: 秩 {len(pivots)} < 未知数个数 {unknowns}")
    for i in range(unknowns, len(m)):
        if any(x != 0 for x in m[i][unknowns:]):
            raise StructuralError(f"方程组不相容: 第 {i} 个零行的右端非零")
    width = len(b[0]) if b else 0
    x: Matrix = [[Fraction(0)] * width for _ in range(unknowns)]
    for i in range(unknowns - 1, -1, -1):
        for c in range(width):
            acc = Fraction(m[i][unknowns + c])
            for k in range(i + 1, unknowns):
                acc -= m[i][k] * x[k][c]
            x[i][c] = acc / m[i][i]
    return x
