"""
初等对称函数
u = Σaᵢ，v = Σⱼ∏_{i≠j}aᵢ，w = ∏aᵢ
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple, TypeVar

from core.errors import DomainError
from core.numbers import BigReal, Number

T = TypeVar("T")


@dataclass(frozen=True)
class SymTriple:
    """
    属性:
        u: e₁ = Σaᵢ
        v: e_{m-1} = Σⱼ∏_{i≠j}aᵢ（m=1 时为 1）
        w: e_m = ∏aᵢ
    """
    u: BigReal
    v: BigReal
    w: BigReal

    def as_tuple(self) -> Tuple[BigReal, BigReal, BigReal]:
        return self.u, self.v, self.w


def elementary(a: Sequence[T], one: T) -> Tuple[T, T, T]:
    """
    对任意支持 + 与 * 的数值类型求 (u, v, w)

    v 用前缀积与后缀积计算，不做除法（某个 aᵢ 为 0 时依然正确）。
    """
    m = len(a)
    prefix: List[T] = [one]
    for x in a:
        prefix.append(prefix[-1] * x)
    suffix: List[T] = [one] * (m + 1)
    for i in range(m - 1, -1, -1):
        suffix[i] = suffix[i + 1] * a[i]
    u = a[0]
    for x in a[1:]:
        u = u + x
    v = prefix[0] * suffix[1]
    for j in range(1, m):
        v = v + prefix[j] * suffix[j + 1]
    return u, v, prefix[m]


def sym_triple(a: Sequence[Number], bits: int = 256) -> SymTriple:
    """
    计算带误差传播的 (u, v, w)

    参数:
        a: 正实数列表（BigReal、Fraction、int 或 mpf）
        bits: 非 BigReal 输入转换时使用的精度

    返回:
        SymTriple

    异常:
        DomainError: 列表为空或含非正数
    """
    if not a:
        raise DomainError("sym_triple 需要至少一个变量")
    values = [BigReal.coerce(x, bits) for x in a]
    for i, x in enumerate(values):
        if x.value <= 0:
            raise DomainError(f"第 {i} 个变量必须为正: {x}")
    one = BigReal.exact(1, min(x.prec_bits for x in values))
    return SymTriple(*elementary(values, one))
