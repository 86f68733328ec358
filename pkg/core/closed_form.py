"""
闭式表达式模块
以表达式树保存 ζ(s)、ψ₁ 差、π 等常数的有理组合，仅在比较时按所需精度求值
"""

import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, List, Tuple, Union

from .errors import DomainError
from .numbers import BigReal, Precision
from .specfun import digamma_at_one, pi_value, polygamma1, zeta

logger = logging.getLogger(__name__)

Operand = Union["Expr", Fraction, int]


def _coerce(x: Operand) -> "Expr":
    if isinstance(x, Expr):
        return x
    if isinstance(x, (int, Fraction)):
        return Rational(Fraction(x))
    raise DomainError(f"无法转换为闭式表达式: {x!r}")


class Expr(ABC):
    """闭式表达式基类"""

    @abstractmethod
    def evaluate(self, prec: Precision) -> BigReal:
        """按给定精度求值"""
        pass

    @abstractmethod
    def to_dict(self) -> Dict[str, Any]:
        """导出为 JSON 表达式树"""
        pass

    def __add__(self, other: Operand) -> "Expr":
        return Add((self, _coerce(other)))

    def __radd__(self, other: Operand) -> "Expr":
        return Add((_coerce(other), self))

    def __neg__(self) -> "Expr":
        return Mul((Rational(Fraction(-1)), self))

    def __sub__(self, other: Operand) -> "Expr":
        return self + (-_coerce(other))

    def __rsub__(self, other: Operand) -> "Expr":
        return _coerce(other) + (-self)

    def __mul__(self, other: Operand) -> "Expr":
        return Mul((self, _coerce(other)))

    def __rmul__(self, other: Operand) -> "Expr":
        return Mul((_coerce(other), self))

    def __truediv__(self, other: Operand) -> "Expr":
        return Mul((self, Inv(_coerce(other))))

    def __rtruediv__(self, other: Operand) -> "Expr":
        return Mul((_coerce(other), Inv(self)))

    def rational_value(self) -> Fraction:
        """纯有理表达式的精确值；含符号时抛出 DomainError"""
        raise DomainError(f"表达式不是有理数: {self}")


@dataclass(frozen=True, eq=True)
class Rational(Expr):
    value: Fraction

    def evaluate(self, prec: Precision) -> BigReal:
        return BigReal.exact(self.value, prec.bits)

    def to_dict(self) -> Dict[str, Any]:
        return {"op": "rational", "value": str(self.value)}

    def rational_value(self) -> Fraction:
        return self.value

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, eq=True)
class Symbol(Expr):
    """具名常数，如 zeta(3)、psi1diff()"""
    name: str
    args: Tuple[Fraction, ...] = ()

    def evaluate(self, prec: Precision) -> BigReal:
        return get_symbol_registry().evaluate(self.name, self.args, prec)

    def to_dict(self) -> Dict[str, Any]:
        return {"op": "symbol", "name": self.name, "args": [str(a) for a in self.args]}

    def __str__(self) -> str:
        return f"{self.name}({','.join(str(a) for a in self.args)})"


@dataclass(frozen=True, eq=True)
class Add(Expr):
    terms: Tuple[Expr, ...]

    def evaluate(self, prec: Precision) -> BigReal:
        total = BigReal.exact(0, prec.bits)
        for term in self.terms:
            total = total + term.evaluate(prec)
        return total

    def to_dict(self) -> Dict[str, Any]:
        return {"op": "add", "terms": [t.to_dict() for t in self.terms]}

    def rational_value(self) -> Fraction:
        return sum((t.rational_value() for t in self.terms), Fraction(0))

    def __str__(self) -> str:
        text = " + ".join(str(t) for t in self.terms)
        return text.replace("+ -", "- ")


@dataclass(frozen=True, eq=True)
class Mul(Expr):
    factors: Tuple[Expr, ...]

    def evaluate(self, prec: Precision) -> BigReal:
        result = BigReal.exact(1, prec.bits)
        for factor in self.factors:
            result = result * factor.evaluate(prec)
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {"op": "mul", "factors": [f.to_dict() for f in self.factors]}

    def rational_value(self) -> Fraction:
        result = Fraction(1)
        for factor in self.factors:
            result *= factor.rational_value()
        return result

    def __str__(self) -> str:
        num = [f for f in self.factors if not isinstance(f, Inv)]
        den = [f.operand for f in self.factors if isinstance(f, Inv)]
        num_text = "*".join(_wrap(f) for f in num) or "1"
        if num_text.startswith("-1*"):
            num_text = "-" + num_text[3:]
        if not den:
            return num_text
        den_text = "*".join(_wrap(f) for f in den)
        if len(den) > 1 or isinstance(den[0], Mul):
            den_text = f"({den_text})"
        return f"{num_text}/{den_text}"


@dataclass(frozen=True, eq=True)
class Inv(Expr):
    operand: Expr

    def evaluate(self, prec: Precision) -> BigReal:
        return 1 / self.operand.evaluate(prec)

    def to_dict(self) -> Dict[str, Any]:
        return {"op": "inv", "operand": self.operand.to_dict()}

    def rational_value(self) -> Fraction:
        value = self.operand.rational_value()
        if value == 0:
            raise DomainError("除以零")
        return 1 / value

    def __str__(self) -> str:
        return f"1/{_wrap(self.operand)}"


def _wrap(expr: Expr) -> str:
    text = str(expr)
    return f"({text})" if isinstance(expr, Add) else text


def from_dict(data: Dict[str, Any]) -> Expr:
    """从 JSON 表达式树恢复"""
    op = data.get("op")
    if op == "rational":
        return Rational(Fraction(data["value"]))
    if op == "symbol":
        return Symbol(data["name"], tuple(Fraction(a) for a in data.get("args", [])))
    if op == "add":
        return Add(tuple(from_dict(t) for t in data["terms"]))
    if op == "mul":
        return Mul(tuple(from_dict(f) for f in data["factors"]))
    if op == "inv":
        return Inv(from_dict(data["operand"]))
    raise DomainError(f"未知的表达式节点: {op!r}")


Evaluator = Callable[[Tuple[Fraction, ...], Precision], BigReal]


class SymbolRegistry:
    """具名常数注册表"""

    def __init__(self):
        self._symbols: Dict[str, Tuple[Evaluator, int, str]] = {}
        self._register_default_symbols()

    def _register_default_symbols(self):
        """注册默认的常数"""
        self.register("zeta", lambda args, prec: zeta(int(args[0]), prec), 1, "Riemann ζ(s)，s 为整数")
        self.register("psi1", lambda args, prec: polygamma1(args[0], prec), 1, "三伽马函数 ψ₁(q)")
        self.register("psi1diff",
                      lambda args, prec: polygamma1(Fraction(1, 3), prec) - polygamma1(Fraction(2, 3), prec),
                      0, "ψ₁(1/3) - ψ₁(2/3)")
        self.register("pi", lambda args, prec: pi_value(prec), 0, "π")
        self.register("euler", lambda args, prec: -digamma_at_one(prec), 0, "Euler 常数 γ")
        self.register("digamma1", lambda args, prec: digamma_at_one(prec), 0, "ψ₀(1) = -γ")

    def register(self, name: str, evaluator: Evaluator, arity: int, description: str = ""):
        """
        注册一个常数

        参数:
            name: 名称
            evaluator: (参数元组, 精度) -> BigReal
            arity: 参数个数（-1 表示任意）
            description: 描述
        """
        self._symbols[name] = (evaluator, arity, description)

    def unregister(self, name: str):
        if name in self._symbols:
            del self._symbols[name]

    def is_symbol_supported(self, name: str) -> bool:
        return name in self._symbols

    def list_symbols(self) -> List[Dict[str, Any]]:
        return [{"name": name, "arity": arity, "description": desc}
                for name, (_, arity, desc) in self._symbols.items()]

    def evaluate(self, name: str, args: Tuple[Fraction, ...], prec: Precision) -> BigReal:
        """
        求常数的值

        异常:
            DomainError: 如果名称未注册或参数个数不符
        """
        entry = self._symbols.get(name)
        if entry is None:
            supported = ", ".join(self._symbols)
            raise DomainError(f"未知的常数: {name}。支持的常数: {supported}")
        evaluator, arity, _ = entry
        if arity >= 0 and len(args) != arity:
            raise DomainError(f"{name} 需要 {arity} 个参数，收到 {len(args)} 个")
        return evaluator(args, prec)


# 全局常数注册表实例
_global_registry = SymbolRegistry()


def get_symbol_registry() -> SymbolRegistry:
    """获取全局常数注册表实例"""
    return _global_registry


def zeta_symbol(s: int) -> Symbol:
    return Symbol("zeta", (Fraction(s),))


PSI1_DIFF = Symbol("psi1diff")
PI = Symbol("pi")
