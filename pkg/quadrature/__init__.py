"""
Bessel 矩积分的高精度求积
"""

from core.closed_form import get_symbol_registry
from .products import BesselProduct, BesselSum, moment_product
from .integrator import (QuadratureResult, integrate_direct, integrate_unit_interval, moment,
                         normalized_moment)
from .nested import (I_RHO2_FORMS, family_f, family_g, i_rho2_alpha6, i_rho2_alpha6_target,
                     nested_moment, next_to_last_sides, symmetric_nested, tail_nested)
from .limits import ClosedFormEntry, LimitReport, closed_form_table, find_closed_form, large_n_limits


def _moment_symbol(args, prec):
    return moment(BesselProduct(*(int(a) for a in args)), prec).value


# moment(p,a,b,c,d) 可以出现在闭式表达式与命令行常数中
get_symbol_registry().register("moment", _moment_symbol, -1, "∫u^p·K₀^a·K₁^b·I₀^c·I₁^d")

__all__ = [
    'BesselProduct', 'BesselSum', 'moment_product',
    'QuadratureResult', 'moment', 'normalized_moment', 'integrate_direct', 'integrate_unit_interval',
    'nested_moment', 'tail_nested', 'family_f', 'family_g', 'symmetric_nested',
    'I_RHO2_FORMS', 'i_rho2_alpha6', 'i_rho2_alpha6_target', 'next_to_last_sides',
    'ClosedFormEntry', 'LimitReport', 'closed_form_table', 'find_closed_form', 'large_n_limits',
]
