"""
连分数、三项递推与有理逼近
"""

from .polynomials import K, IntPoly
from .catalog import (PROVED, PSLQ_CONJECTURAL, ContFracSpec, ThreeTermRecurrence, catalog,
                      export_catalog_json, get_entry, load_catalog_json)
from .evaluate import (CharacteristicRoots, ConvergentSequence, ExponentFit, cf_value, cf_value_exact,
                       characteristic_roots, convergence_exponent, convergents)
from .chains import ChainResult, Mobius, TailProfile, chain_tail_profile, z_at, z_chain_from_moments
from .apery import VARIANTS as APERY_VARIANTS, apery_closed_forms, binomial_part, replay_residuals
from .higher_order import (KAPPA4_RESCALING, HigherOrderReport, HolonomicRecurrence, derive_recurrence,
                           first_valid_k, higher_order_recurrence, published_recurrence, rescale_recurrence)

__all__ = [
    'K', 'IntPoly',
    'PROVED', 'PSLQ_CONJECTURAL', 'ContFracSpec', 'ThreeTermRecurrence', 'catalog', 'get_entry',
    'export_catalog_json', 'load_catalog_json',
    'cf_value', 'cf_value_exact', 'ConvergentSequence', 'convergents', 'CharacteristicRoots',
    'characteristic_roots', 'ExponentFit', 'convergence_exponent',
    'Mobius', 'ChainResult', 'TailProfile', 'z_at', 'z_chain_from_moments', 'chain_tail_profile',
    'APERY_VARIANTS', 'apery_closed_forms', 'binomial_part', 'replay_residuals',
    'HolonomicRecurrence', 'HigherOrderReport', 'derive_recurrence', 'first_valid_k',
    'published_recurrence', 'rescale_recurrence', 'higher_order_recurrence', 'KAPPA4_RESCALING',
]
