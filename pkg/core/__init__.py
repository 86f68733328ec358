"""
Bessel 矩实验室核心模块
"""

from .errors import (DivergenceError, DomainError, EvaluationError, LabError, PrecisionError, SingularPointError,
                     StructuralError, UnsupportedSubfamilyError, VerificationError)
from .numbers import BigRational, BigReal, Precision
from .config import LabConfig, get_config, reset_config, set_config
from .closed_form import Expr, Rational, Symbol, get_symbol_registry
from .parser import parse_expression, parse_values
from .cache import ResultCache

__all__ = [
    'LabError', 'DomainError', 'DivergenceError', 'StructuralError', 'PrecisionError', 'EvaluationError',
    'UnsupportedSubfamilyError', 'SingularPointError', 'VerificationError',
    'BigRational', 'BigReal', 'Precision',
    'LabConfig', 'get_config', 'reset_config', 'set_config',
    'Expr', 'Rational', 'Symbol', 'get_symbol_registry',
    'parse_expression', 'parse_values',
    'ResultCache',
]
