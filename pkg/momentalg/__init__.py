"""
I_{n,j}^{(κ)} 的精确有理代数
"""

from .recurrences import (MomentIndex, class_indices, even_constraint, generic_reduced_two_step,
                          reduced_two_step, step_matrix,
                          two_step_coeffs, two_step_matrix)
from .decompose import (BasisDecomposition, basis_exponents, basis_product, basis_value, decompose,
                        decompose_product)
from .spectrum import AsymptoticSpectrum, asymptotic_eigenvalues

__all__ = [
    'MomentIndex', 'step_matrix', 'even_constraint', 'two_step_coeffs', 'two_step_matrix',
    'reduced_two_step', 'generic_reduced_two_step', 'class_indices',
    'BasisDecomposition', 'basis_exponents', 'basis_product', 'decompose', 'decompose_product',
    'basis_value',
    'AsymptoticSpectrum', 'asymptotic_eigenvalues',
]
