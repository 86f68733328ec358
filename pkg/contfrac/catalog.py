"""
连分数目录
z(k-1) = N(k)/(D(k) + z(k)) 的九个已知实例，目标值以闭式表达式树保存，比较时才求值
"""

import json
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from core.closed_form import PSI1_DIFF, Expr, from_dict, zeta_symbol
from core.errors import DomainError
from .polynomials import IntPoly

logger = logging.getLogger(__name__)

PROVED = "proved"
PSLQ_CONJECTURAL = "pslq_conjectural"
SCHEMA_VERSION = 1


@dataclass(frozen=True)
class ThreeTermRecurrence:
    """
    y(k+1) - B(k)·y(k) + A(k)·y(k-1) = 0

    属性:
        b: 中间系数 B
        a: 末项系数 A
        start: 初值所在的下标 s，初值为 y(s), y(s+1)
        y0, y1: 初值
    """
    b: IntPoly
    a: IntPoly
    start: int = 0
    y0: Fraction = Fraction(1)
    y1: Fraction = Fraction(0)

    def with_initial(self, y0, y1, start: Optional[int] = None) -> "ThreeTermRecurrence":
        return ThreeTermRecurrence(self.b, self.a, self.start if start is None else start,
                                   Fraction(y0), Fraction(y1))

    def next_value(self, k: int, y_prev: Fraction, y_cur: Fraction) -> Fraction:
        """由 y(k-1), y(k) 求 y(k+1)"""
        return self.b(k) * y_cur - self.a(k) * y_prev

    def __str__(self) -> str:
        return f"y(k+1) - ({self.b})·y(k) + ({self.a})·y(k-1) = 0"


@dataclass(frozen=True)
class ContFracSpec:
    """
    连分数 z(k-1) = N(k)/(D(k) + z(k))，其值 z(start_k) 等于 target

    属性:
        name: 目录中的名称
        numerator: N(k)
        denominator: D(k)
        start_k: 起始下标
        target: z(start_k) 的闭式值
        provenance: proved 或 pslq_conjectural
        constant: 所涉及的常数族（zeta2 / psi1 / zeta3）
    """
    name: str
    numerator: IntPoly
    denominator: IntPoly
    start_k: int
    target: Expr
    provenance: str
    constant: str
    description: str = ""

    def __post_init__(self):
        if self.numerator.is_zero or self.denominator.is_zero:
            raise DomainError(f"{self.name}: 分子与分母多项式不能为零")
        if self.provenance not in (PROVED, PSLQ_CONJECTURAL):
            raise DomainError(f"{self.name}: 未知的来源标记 {self.provenance}")

    def recurrence(self, y0=1, y1=0) -> ThreeTermRecurrence:
        """配对的三项递推（B = D，A = -N），初值取在 start_k 与 start_k+1"""
        return ThreeTermRecurrence(self.denominator, -self.numerator, self.start_k, Fraction(y0), Fraction(y1))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "numerator": self.numerator.to_dict(),
            "denominator": self.denominator.to_dict(),
            "start_k": self.start_k,
            "target": self.target.to_dict(),
            "target_text": str(self.target),
            "provenance": self.provenance,
            "constant": self.constant,
            "description": self.description,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ContFracSpec":
        return cls(data["name"], IntPoly.from_dict(data["numerator"]), IntPoly.from_dict(data["denominator"]),
                   int(data["start_k"]), from_dict(data["target"]), data["provenance"], data["constant"],
                   data.get("description", ""))


_ENTRIES: List[Tuple[str, str, str, Any, str, str, str]] = [
    ("zeta2_apery", "k**4", "11*k**2+11*k+3", lambda: 5 / zeta_symbol(2) - 3, PROVED, "zeta2",
     "ζ(2) 的 Apéry 连分数"),
    ("zeta2_8k4", "8*k**4", "7*k**2+7*k+2", lambda: 4 / zeta_symbol(2) - 2, PROVED, "zeta2",
     "ζ(2) 的另一已知情形"),
    ("zeta2_4k", "k**4*(4*k+1)*(4*k-1)", "(2*k+1)*(3*k**2+3*k+1)",
     lambda: Fraction(5, 2) / zeta_symbol(2) - 1, PROVED, "zeta2", "ζ(2) 的另一已知情形"),
    ("zeta2_pslq", "3*k**4*(3*k+1)*(3*k-1)", "(2*k+1)*(13*k**2+13*k+4)",
     lambda: 7 / zeta_symbol(2) - 4, PSLQ_CONJECTURAL, "zeta2", "PSLQ 发现的 ζ(2) 连分数"),
    ("psi1_kappa3", "-9*k**4", "10*k**2+10*k+3", lambda: 18 / PSI1_DIFF - 3, PROVED, "psi1",
     "κ=3 矩递推得到的 ψ₁(1/3)-ψ₁(2/3) 连分数"),
    ("zeta3_apery", "-k**6", "(2*k+1)*(17*k**2+17*k+5)", lambda: 6 / zeta_symbol(3) - 5, PROVED, "zeta3",
     "ζ(3) 的 Apéry 连分数"),
    ("zeta3_pslq", "-k**6", "(2*k+1)*(3*k**2+3*k+1)",
     lambda: 8 / (7 * zeta_symbol(3)) - 1, PSLQ_CONJECTURAL, "zeta3", "PSLQ 发现的 ζ(3) 连分数"),
    ("zeta3_kappa4_half", "-4*k**6", "(2*k+1)*(5*k**2+5*k+2)/2",
     lambda: 6 / (7 * zeta_symbol(3)) - 1, PROVED, "zeta3", "κ=4 连分数，分母除以 2 的形式"),
    ("zeta3_kappa4", "-16*k**6", "(2*k+1)*(5*k**2+5*k+2)",
     lambda: 12 / (7 * zeta_symbol(3)) - 2, PROVED, "zeta3", "κ=4 矩递推得到的连分数"),
]

_catalog: Optional[List[ContFracSpec]] = None


def catalog() -> List[ContFracSpec]:
    """目录中的全部连分数（构造后不再改变）"""
    global _catalog
    if _catalog is None:
        _catalog = [
            ContFracSpec(name, IntPoly.from_expr(num), IntPoly.from_expr(den), 0, target(), provenance,
                         constant, description)
            for name, num, den, target, provenance, constant, description in _ENTRIES
        ]
    return list(_catalog)


def get_entry(name: str) -> ContFracSpec:
    """
    按名称查找目录项

    异常:
        DomainError: 名称不存在
    """
    for spec in catalog():
        if spec.name == name:
            return spec
    names = ", ".join(spec.name for spec in catalog())
    raise DomainError(f"目录中没有 {name}。可用: {names}")


def export_catalog_json(indent: int = 2) -> str:
    """导出目录为 JSON（多项式系数数组、目标表达式树、来源标记）"""
    payload = {"schema_version": SCHEMA_VERSION, "entries": [spec.to_dict() for spec in catalog()]}
    return json.dumps(payload, ensure_ascii=False, indent=indent)


def load_catalog_json(text: str) -> List[ContFracSpec]:
    """
    从 JSON 读回目录

    异常:
        DomainError: 版本不符或格式错误
    """
    try:
        payload = json.loads(text)
        if payload.get("schema_version") != SCHEMA_VERSION:
            raise DomainError(f"不支持的目录版本: {payload.get('schema_version')}")
        return [ContFracSpec.from_dict(entry) for entry in payload["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, DomainError):
            raise
        raise DomainError(f"目录 JSON 格式错误: {exc}") from exc
