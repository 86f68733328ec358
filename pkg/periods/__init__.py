"""
Bessel 矩的周期表示：单纯形积分与对数核积分
"""

from .symmetric import SymTriple, elementary, sym_triple
from .integrands import (FORMS, LOG_KERNEL, MIXED_I0, RAW_SIMPLEX, PeriodSpec, log_kernel_integrand,
                         simplex_integrand)
from .evaluate import (AUTO, DETERMINISTIC, MAX_TENSOR_DIMENSION, MODES, QMC, PeriodCheck, PeriodResult,
                       cross_validate, evaluate_period, integrate_qmc, integrate_tensor, verify_appendixA_identity)

__all__ = [
    'SymTriple', 'elementary', 'sym_triple',
    'FORMS', 'RAW_SIMPLEX', 'LOG_KERNEL', 'MIXED_I0', 'PeriodSpec', 'simplex_integrand',
    'log_kernel_integrand',
    'AUTO', 'DETERMINISTIC', 'QMC', 'MODES', 'MAX_TENSOR_DIMENSION', 'PeriodResult', 'PeriodCheck',
    'evaluate_period',
    'cross_validate', 'integrate_tensor', 'integrate_qmc', 'verify_appendixA_identity',
]
