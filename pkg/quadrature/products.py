"""
Bessel 乘积描述模块
被积函数 u^p·K₀^a·K₁^b·I₀^c·I₁^d 及其有理线性组合
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

from mpmath import mpf

from core.errors import DivergenceError, DomainError

# 节点上的 Bessel 函数值 (I₀, I₁, K₀, K₁)
BesselTuple = Tuple[Optional[mpf], Optional[mpf], mpf, mpf]


@dataclass(frozen=True)
class BesselProduct:
    """
    被积函数 u^p·K₀^a·K₁^b·I₀^c·I₁^d

    参数:
        p: u 的幂次
        a, b, c, d: K₀, K₁, I₀, I₁ 的幂次
    """
    p: int
    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0

    def __post_init__(self):
        for name in ("p", "a", "b", "c", "d"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 0:
                raise DomainError(f"BesselProduct 的 {name} 必须是非负整数，收到: {value!r}")

    @classmethod
    def parse(cls, text: str) -> "BesselProduct":
        """从 'p,a,b,c,d' 形式的字符串构造（缺省的幂次为 0）"""
        parts = [s.strip() for s in text.split(",") if s.strip()]
        if not 1 <= len(parts) <= 5:
            raise DomainError(f"无法解析 Bessel 乘积: {text!r}（格式 p,a,b,c,d）")
        try:
            return cls(*(int(s) for s in parts))
        except ValueError:
            raise DomainError(f"无法解析 Bessel 乘积: {text!r}（格式 p,a,b,c,d）")

    @property
    def weight(self) -> int:
        """Bessel 函数的总幂次"""
        return self.a + self.b + self.c + self.d

    @property
    def decay(self) -> int:
        """无穷远处的指数衰减率 a+b-c-d"""
        return self.a + self.b - self.c - self.d

    @property
    def exponent_at_zero(self) -> int:
        """u → 0 时的幂次（K₁ ~ 1/u，I₁ ~ u/2），对数因子另计"""
        return self.p - self.b + self.d

    @property
    def log_power(self) -> int:
        """u → 0 时 log(1/u) 的幂次（来自 K₀）"""
        return self.a

    @property
    def needs_i(self) -> bool:
        return self.c + self.d > 0

    def divergence(self) -> Optional[Tuple[str, str]]:
        """返回 (端点, 诊断)，可积时返回 None"""
        if self.exponent_at_zero <= -1:
            return "0", (f"{self} 在 u→0 处发散: 幂次 p-b+d = {self.exponent_at_zero} <= -1")
        if self.decay <= 0:
            return "inf", (f"{self} 在 u→∞ 处发散: 衰减率 a+b-c-d = {self.decay} <= 0")
        return None

    def check_integrable(self) -> None:
        """
        检查在 (0, ∞) 上的可积性

        异常:
            DivergenceError: 指明发散的端点
        """
        failure = self.divergence()
        if failure:
            raise DivergenceError(failure[1], endpoint=failure[0])

    def evaluate(self, u: mpf, values: BesselTuple) -> mpf:
        """在节点 u 处求值，values 为 (I₀, I₁, K₀, K₁)"""
        i0, i1, k0, k1 = values
        result = u ** self.p if self.p else mpf(1)
        if self.a:
            result *= k0 ** self.a
        if self.b:
            result *= k1 ** self.b
        if self.c:
            result *= i0 ** self.c
        if self.d:
            result *= i1 ** self.d
        return result

    def __mul__(self, other: "BesselProduct") -> "BesselProduct":
        return BesselProduct(self.p + other.p, self.a + other.a, self.b + other.b,
                             self.c + other.c, self.d + other.d)

    def __str__(self) -> str:
        parts = []
        for symbol, power in (("u", self.p), ("K0", self.a), ("K1", self.b),
                              ("I0", self.c), ("I1", self.d)):
            if power == 1:
                parts.append(symbol)
            elif power > 1:
                parts.append(f"{symbol}^{power}")
        return "*".join(parts) or "1"


@dataclass(frozen=True)
class BesselSum:
    """Bessel 乘积的有理线性组合 Σ cᵢ·fᵢ"""
    terms: Tuple[Tuple[Fraction, BesselProduct], ...]

    @classmethod
    def of(cls, *items) -> "BesselSum":
        """
        构造线性组合

        参数:
            items: BesselProduct，或 (系数, BesselProduct) 对
        """
        terms = []
        for item in items:
            if isinstance(item, BesselProduct):
                terms.append((Fraction(1), item))
            else:
                coeff, product = item
                terms.append((Fraction(coeff), product))
        return cls(tuple(terms))

    @property
    def products(self) -> Sequence[BesselProduct]:
        return [product for _, product in self.terms]

    @property
    def needs_i(self) -> bool:
        return any(product.needs_i for product in self.products)

    @property
    def is_zero(self) -> bool:
        return all(coeff == 0 for coeff, _ in self.terms)

    @property
    def exponent_at_zero(self) -> int:
        return min((p.exponent_at_zero for p in self.products), default=0)

    @property
    def decay(self) -> int:
        return min((p.decay for p in self.products), default=1)

    def divergence(self) -> Optional[Tuple[str, str]]:
        for coeff, product in self.terms:
            if coeff:
                failure = product.divergence()
                if failure:
                    return failure
        return None

    def evaluate(self, u: mpf, values: BesselTuple) -> mpf:
        total = mpf(0)
        for coeff, product in self.terms:
            if coeff:
                total += product.evaluate(u, values) * coeff.numerator / coeff.denominator
        return total

    def __str__(self) -> str:
        return " + ".join(f"({coeff})*{product}" for coeff, product in self.terms) or "0"


def as_sum(f) -> BesselSum:
    """把 BesselProduct 统一为 BesselSum"""
    if isinstance(f, BesselSum):
        return f
    if isinstance(f, BesselProduct):
        return BesselSum.of(f)
    raise DomainError(f"需要 BesselProduct 或 BesselSum，收到: {type(f).__name__}")


def moment_product(kappa: int, n: int, j: int) -> BesselProduct:
    """I_{n,j}^{(κ)} 的被积函数 u^{n+1}·K₀^{κ-j}·K₁^j"""
    return BesselProduct(n + 1, kappa - j, j)


def linear_combination(pairs: Iterable[Tuple[Fraction, BesselProduct]]) -> BesselSum:
    return BesselSum(tuple((Fraction(c), p) for c, p in pairs))
