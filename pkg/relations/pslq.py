"""
PSLQ 整数关系检测
在 mpmath 浮点精度下迭代约化 H 矩阵，找到 Σ aᵢvᵢ ≈ 0 的整数向量或给出范数下界
"""

import math
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import mpmath
from mpmath import mp, mpf

from core.errors import DomainError, PrecisionError
from core.numbers import BigReal

logger = logging.getLogger(__name__)

MAX_VALUES = 8

# 结果中的保护位数（半径必须比置信位数再小这么多）
_RADIUS_MARGIN_DIGITS = 10


@dataclass(frozen=True)
class RelationProblem:
    """
    参数:
        values: 待检测的数值（同一精度）
        labels: 每个数值的名称
        max_coeff: 系数绝对值上限
        confidence_digits: 关系成立所需的位数

    异常:
        DomainError: 数值少于 2 个或多于 8 个，标签数不符，参数非正
        PrecisionError: 输入精度不足以支持 confidence_digits，required_digits 给出所需位数
    """
    values: Tuple[BigReal, ...]
    labels: Tuple[str, ...]
    max_coeff: int = 10 ** 6
    confidence_digits: int = 30

    def __post_init__(self):
        n = len(self.values)
        if n < 2:
            raise DomainError(f"至少需要两个数值，收到: {n}")
        if n > MAX_VALUES:
            raise DomainError(f"最多支持 {MAX_VALUES} 个数值，收到: {n}")
        if len(self.labels) != n:
            raise DomainError(f"标签数 {len(self.labels)} 与数值个数 {n} 不符")
        if self.max_coeff < 1 or self.confidence_digits < 1:
            raise DomainError("max_coeff 与 confidence_digits 必须为正整数")
        need = self.required_digits
        have = self.available_digits
        if have < need:
            raise PrecisionError(f"输入只有约 {have} 位有效数字，置信 {self.confidence_digits} 位需要 {need} 位",
                                 required_digits=need)

    @classmethod
    def of(cls, values: Sequence[BigReal], labels: Optional[Sequence[str]] = None,
           max_coeff: int = 10 ** 6, confidence_digits: int = 30) -> "RelationProblem":
        labels = labels or [f"v{i}" for i in range(len(values))]
        return cls(tuple(values), tuple(labels), max_coeff, confidence_digits)

    @staticmethod
    def required_for(n: int, max_coeff: int, confidence_digits: int) -> int:
        """n 个数值、系数上限 max_coeff 时检测关系需要的输入位数"""
        search = math.ceil(n * math.log10(max_coeff + 1))
        return max(confidence_digits, search) + _RADIUS_MARGIN_DIGITS

    @property
    def required_digits(self) -> int:
        return self.required_for(len(self.values), self.max_coeff, self.confidence_digits)

    @property
    def available_digits(self) -> int:
        """输入数值中最差的有效位数（相对于最大值）"""
        bits = min(v.prec_bits for v in self.values)
        with mp.workprec(bits):
            scale = max(abs(v.value) for v in self.values)
            worst = max(v.radius for v in self.values)
            digits = int(bits * math.log10(2))
            if worst > 0 and scale > 0:
                digits = min(digits, int(-mpmath.log10(worst / scale)))
        return digits


@dataclass(frozen=True)
class IntegerRelation:
    """
    属性:
        coefficients: 整数系数（互素，第一个非零系数为正）
        residual: Σ aᵢvᵢ
        labels: 数值名称
        iterations: 迭代次数
    """
    coefficients: Tuple[int, ...]
    residual: BigReal
    labels: Tuple[str, ...]
    iterations: int

    def as_rational(self, isolate: int = 0) -> Dict[str, Fraction]:
        """把第 isolate 个数值表示为其余数值的有理组合"""
        pivot = self.coefficients[isolate]
        if pivot == 0:
            raise DomainError(f"第 {isolate} 个系数为零，无法解出 {self.labels[isolate]}")
        return {label: Fraction(-a, pivot) for i, (label, a) in enumerate(zip(self.labels, self.coefficients))
                if i != isolate}

    def as_dict(self) -> Dict[str, object]:
        return {
            "found": True,
            "labels": list(self.labels),
            "coefficients": [str(a) for a in self.coefficients],
            "residual": self.residual.to_decimal(5),
            "iterations": self.iterations,
        }

    def __str__(self) -> str:
        terms = [f"({a})*{label}" for a, label in zip(self.coefficients, self.labels) if a]
        return " + ".join(terms) + " = 0"


@dataclass(frozen=True)
class NoRelation:
    """
    没有找到关系

    属性:
        norm_bound: 在当前精度下，任何关系的欧氏范数都不小于该值
        reason: bound（下界超过 max_coeff）、iterations（迭代次数用尽）或 precision（精度耗尽）
    """
    norm_bound: mpf
    iterations: int
    reason: str

    def as_dict(self) -> Dict[str, object]:
        return {
            "found": False,
            "norm_bound": mpmath.nstr(self.norm_bound, 6),
            "iterations": self.iterations,
            "reason": self.reason,
        }


RelationResult = Union[IntegerRelation, NoRelation]

# γ > 2/√3
_GAMMA_OFFSET = mpf(1) / 100


def _nint(x: mpf) -> int:
    return int(mpmath.nint(x))


def _canonical(vector: Sequence[int]) -> Tuple[int, ...]:
    g = 0
    for a in vector:
        g = math.gcd(g, a)
    vector = [a // g for a in vector] if g > 1 else list(vector)
    for a in vector:
        if a:
            if a < 0:
                vector = [-b for b in vector]
            break
    return tuple(vector)


class _PslqState:
    """一次 PSLQ 运行的矩阵状态（0 起下标）"""

    def __init__(self, x: List[mpf]):
        n = len(x)
        self.n = n
        self.a = [[int(i == j) for j in range(n)] for i in range(n)]
        self.b = [[int(i == j) for j in range(n)] for i in range(n)]
        s = [mpf(0)] * n
        total = mpf(0)
        for k in range(n - 1, -1, -1):
            total += x[k] ** 2
            s[k] = mpmath.sqrt(total)
        self.y = [xk / s[0] for xk in x]
        s = [sk / s[0] for sk in s]
        self.h = [[mpf(0)] * (n - 1) for _ in range(n)]
        for i in range(n):
            if i < n - 1:
                self.h[i][i] = s[i + 1] / s[i]
            for j in range(min(i, n - 1)):
                self.h[i][j] = -self.y[i] * self.y[j] / (s[j] * s[j + 1])
        for i in range(1, n):
            self._reduce_row(i, i - 1)

    def _reduce_row(self, i: int, top: int) -> None:
        for j in range(top, -1, -1):
            if not self.h[j][j]:
                raise ZeroDivisionError
            t = _nint(self.h[i][j] / self.h[j][j])
            if not t:
                continue
            self.y[j] += t * self.y[i]
            for k in range(j + 1):
                self.h[i][k] -= t * self.h[j][k]
            for k in range(self.n):
                self.a[i][k] -= t * self.a[j][k]
                self.b[k][j] += t * self.b[k][i]

    def step(self, gamma: mpf) -> None:
        n = self.n
        h = self.h
        m = max(range(n - 1), key=lambda i: gamma ** (i + 1) * abs(h[i][i]))
        self.y[m], self.y[m + 1] = self.y[m + 1], self.y[m]
        h[m], h[m + 1] = h[m + 1], h[m]
        self.a[m], self.a[m + 1] = self.a[m + 1], self.a[m]
        for row in self.b:
            row[m], row[m + 1] = row[m + 1], row[m]
        if m < n - 2:
            t0 = mpmath.sqrt(h[m][m] ** 2 + h[m][m + 1] ** 2)
            if not t0:
                raise ZeroDivisionError
            t1, t2 = h[m][m] / t0, h[m][m + 1] / t0
            for i in range(m, n):
                t3, t4 = h[i][m], h[i][m + 1]
                h[i][m] = t1 * t3 + t2 * t4
                h[i][m + 1] = -t2 * t3 + t1 * t4
        for i in range(m + 1, n):
            self._reduce_row(i, min(i - 1, m + 1))

    def norm_bound(self) -> mpf:
        largest = max(abs(self.h[j][j]) for j in range(self.n - 1))
        return 1 / largest if largest else mpmath.inf

    def max_a(self) -> int:
        return max(abs(v) for row in self.a for v in row)


def _residual(values: Sequence[BigReal], coeffs: Sequence[int]) -> BigReal:
    total = BigReal.exact(0, values[0].prec_bits)
    for v, a in zip(values, coeffs):
        if a:
            total = total + v * a
    return total


def pslq(problem: RelationProblem, max_iterations: Optional[int] = None) -> RelationResult:
    """
    检测整数关系

    参数:
        problem: 输入数值与参数
        max_iterations: 迭代上限，默认 50·n²·confidence_digits

    返回:
        IntegerRelation：残差在 10^-confidence_digits 与输入误差之内，且 max|aᵢ| <= max_coeff；
        否则 NoRelation，附带当前精度下的范数下界

    异常:
        DomainError: 某个输入为零
    """
    n = len(problem.values)
    bits = min(v.prec_bits for v in problem.values)
    cap = max_iterations or 50 * n * n * problem.confidence_digits
    with mp.workprec(bits):
        scale = max(abs(v.value) for v in problem.values)
        if any(not v.value for v in problem.values):
            raise DomainError("PSLQ 的输入不能含零")
        # 缩放到最大分量为 1，不改变整数关系
        x = [v.value / scale for v in problem.values]
        tol = mpf(10) ** (-problem.confidence_digits)
        exhausted = mpf(10) ** (int(bits * math.log10(2)) - 5)
        gamma = 2 / mpmath.sqrt(3) + _GAMMA_OFFSET
        state = _PslqState(x)
        iteration = 0
        reason = "iterations"
        try:
            while iteration < cap:
                iteration += 1
                state.step(gamma)
                found = _check_columns(problem, state, tol, iteration)
                if found is not None:
                    return found
                bound = state.norm_bound()
                if bound >= problem.max_coeff:
                    reason = "bound"
                    break
                if state.max_a() > exhausted:
                    reason = "precision"
                    break
                if iteration % 100 == 0:
                    logger.debug(f"PSLQ 第 {iteration} 次迭代，范数下界 {mpmath.nstr(bound, 5)}")
        except ZeroDivisionError:
            reason = "precision"
        bound = state.norm_bound()
    if reason == "precision":
        logger.warning(f"PSLQ 在第 {iteration} 次迭代耗尽精度，范数下界 {mpmath.nstr(bound, 5)}")
    else:
        logger.info(f"PSLQ 未找到关系（{reason}），范数下界 {mpmath.nstr(bound, 5)}")
    return NoRelation(bound, iteration, reason)


def _check_columns(problem: RelationProblem, state: _PslqState, tol: mpf,
                   iteration: int) -> Optional[IntegerRelation]:
    for i in range(state.n):
        if abs(state.y[i]) >= tol:
            continue
        coeffs = _canonical([state.b[j][i] for j in range(state.n)])
        if not any(coeffs) or max(abs(a) for a in coeffs) > problem.max_coeff:
            continue
        residual = _residual(problem.values, coeffs)
        # |Σaᵢvᵢ| <= Σ|aᵢ|·rᵢ + 10^-confidence
        if not residual.contains(0, mpf(10) ** (-problem.confidence_digits)):
            continue
        relation = IntegerRelation(coeffs, residual, problem.labels, iteration)
        logger.info(f"PSLQ 第 {iteration} 次迭代找到关系: {relation}")
        return relation
    return None
