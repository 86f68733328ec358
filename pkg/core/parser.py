"""
常数表达式解析模块
负责把命令行上的常数（如 "7/8*zeta(3)"、"moment(1,4)"、"psi1diff()"）解析为闭式表达式树
"""

import re
from fractions import Fraction
from typing import List, Sequence, Tuple

from .closed_form import Expr, Rational, Symbol, get_symbol_registry
from .errors import DomainError

_TOKEN = re.compile(r"\s*(?:(\d+(?:\.\d*)?|\.\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*/^(),]))")


def _tokenize(text: str) -> List[Tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if not match:
            raise DomainError(f"无法解析表达式 {text!r}：第 {pos + 1} 个字符 {text[pos]!r}")
        number, name, op = match.groups()
        if number is not None:
            tokens.append(("num", number))
        elif name is not None:
            tokens.append(("name", name))
        else:
            tokens.append(("op", "^" if op == "**" else op))
        pos = match.end()
    return tokens


class _Parser:
    """
    递归下降解析器

    expr   := term (('+'|'-') term)*
    term   := unary (('*'|'/') unary)*
    unary  := ('+'|'-') unary | power
    power  := atom ('^' 整数)?
    atom   := 数字 | 名称 ['(' 参数 ')'] | '(' expr ')'
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.pos = 0

    def _peek(self) -> Tuple[str, str]:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else ("end", "")

    def _take(self) -> Tuple[str, str]:
        token = self._peek()
        self.pos += 1
        return token

    def _expect(self, op: str) -> None:
        kind, value = self._take()
        if kind != "op" or value != op:
            raise DomainError(f"表达式 {self.text!r} 中缺少 {op!r}")

    def parse(self) -> Expr:
        if not self.tokens:
            raise DomainError("表达式为空")
        expr = self._expr()
        if self._peek()[0] != "end":
            raise DomainError(f"表达式 {self.text!r} 末尾有多余内容: {self._peek()[1]!r}")
        return expr

    def _expr(self) -> Expr:
        result = self._term()
        while self._peek() in (("op", "+"), ("op", "-")):
            _, op = self._take()
            rhs = self._term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def _term(self) -> Expr:
        result = self._unary()
        while self._peek() in (("op", "*"), ("op", "/")):
            _, op = self._take()
            rhs = self._unary()
            if op == "/" and isinstance(rhs, Rational) and rhs.value == 0:
                raise DomainError(f"表达式 {self.text!r} 中除以零")
            result = _fold(result * rhs if op == "*" else result / rhs)
        return _fold(result)

    def _unary(self) -> Expr:
        if self._peek() == ("op", "-"):
            self._take()
            return _fold(-self._unary())
        if self._peek() == ("op", "+"):
            self._take()
        return self._power()

    def _power(self) -> Expr:
        base = self._atom()
        if self._peek() != ("op", "^"):
            return base
        self._take()
        negative = self._peek() == ("op", "-")
        if negative:
            self._take()
        kind, value = self._take()
        if kind != "num" or not value.isdigit():
            raise DomainError(f"表达式 {self.text!r} 中的指数必须是整数")
        exponent = int(value)
        result: Expr = Rational(Fraction(1))
        for _ in range(exponent):
            result = result * base
        if negative:
            if isinstance(base, Rational) and base.value == 0:
                raise DomainError(f"表达式 {self.text!r} 中除以零")
            result = 1 / result
        return _fold(result)

    def _atom(self) -> Expr:
        kind, value = self._take()
        if kind == "num":
            return Rational(Fraction(value))
        if kind == "name":
            return self._symbol(value)
        if (kind, value) == ("op", "("):
            inner = self._expr()
            self._expect(")")
            return inner
        raise DomainError(f"表达式 {self.text!r} 在 {value or '末尾'!r} 处不完整")

    def _symbol(self, name: str) -> Expr:
        if not get_symbol_registry().is_symbol_supported(name):
            raise DomainError(f"未知的常数: {name}")
        args: List[Fraction] = []
        if self._peek() == ("op", "("):
            self._take()
            if self._peek() != ("op", ")"):
                args.append(self._argument())
                while self._peek() == ("op", ","):
                    self._take()
                    args.append(self._argument())
            self._expect(")")
        return Symbol(name, tuple(args))

    def _argument(self) -> Fraction:
        """常数的参数必须是有理数"""
        try:
            return self._expr().rational_value()
        except ZeroDivisionError:
            raise DomainError(f"表达式 {self.text!r} 中除以零")


def _fold(expr: Expr) -> Expr:
    """纯有理子表达式折叠为一个有理数"""
    try:
        return Rational(expr.rational_value())
    except DomainError:
        return expr
    except ZeroDivisionError:
        raise DomainError("表达式中除以零")


def parse_expression(text: str) -> Expr:
    """
    解析常数表达式

    参数:
        text: 表达式文本，支持 + - * / ^、括号、有理数与已注册的常数

    返回:
        闭式表达式树

    异常:
        DomainError: 语法错误、未知常数或除以零
    """
    return _Parser(text).parse()


def parse_values(texts: Sequence[str]) -> List[Tuple[str, Expr]]:
    """
    解析一组常数

    返回:
        [(标签, 表达式), ...]，标签为去掉首尾空白的原文
    """
    return [(text.strip(), parse_expression(text)) for text in texts]
