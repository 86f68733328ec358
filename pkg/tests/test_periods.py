"""
Tests for periods - 单纯形与对数核周期表示
"""
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from core.errors import DomainError, SingularPointError
from core.numbers import Precision
from periods import (DETERMINISTIC, LOG_KERNEL, MIXED_I0, QMC, RAW_SIMPLEX, PeriodSpec, cross_validate,
                     elementary, evaluate_period, log_kernel_integrand, simplex_integrand, sym_triple,
                     verify_appendixA_identity)
from quadrature import BesselProduct, moment


class TestSymmetric:
    """Test the elementary symmetric triple"""

    def test_three_ones(self):
        """Test (u, v, w) for (1, 1, 1)"""
        t = sym_triple([1, 1, 1])
        assert (t.u.value, t.v.value, t.w.value) == (3, 3, 1)

    def test_two_variables(self):
        """Test (u, v, w) for (1, 2)"""
        t = sym_triple([1, 2])
        assert tuple(x.value for x in t.as_tuple()) == (3, 3, 2)

    def test_single_variable(self):
        """Test that v = 1 for one variable"""
        assert elementary([Fraction(1, 3)], Fraction(1)) == (Fraction(1, 3), 1, Fraction(1, 3))

    def test_zero_entry_without_division(self):
        """Test that a zero coordinate leaves v well defined"""
        assert elementary([Fraction(0), Fraction(2), Fraction(3)], Fraction(1)) == (5, 6, 0)

    def test_invalid(self):
        """Test empty and non-positive input"""
        with pytest.raises(DomainError):
            sym_triple([])
        with pytest.raises(DomainError):
            sym_triple([1, -2])


class TestIntegrands:
    """Test pointwise integrand values"""

    def test_spec_validation(self):
        """Test rejected parameters"""
        with pytest.raises(DomainError):
            PeriodSpec(2)
        with pytest.raises(DomainError):
            PeriodSpec(4, p=2)
        with pytest.raises(DomainError):
            PeriodSpec(4, form="nope")
        with pytest.raises(DomainError):
            PeriodSpec(4, p=3, form=MIXED_I0)

    def test_dimension_and_normalization(self):
        """Test the dimension of each form and the moment scale"""
        assert PeriodSpec(5).dimension == 4
        assert PeriodSpec(5, form=LOG_KERNEL).dimension == 3
        assert PeriodSpec(5).normalization == Fraction(1, 16)
        assert PeriodSpec(5, p=3).normalization == Fraction(1, 4)
        assert PeriodSpec(3, form=MIXED_I0).product == BesselProduct(1, 3, 0, 1)

    def test_raw_simplex_point(self):
        """Test 1/(w + r·v) at (1/4, 1/4) for n=3"""
        value = simplex_integrand(PeriodSpec(3), [Fraction(1, 4), Fraction(1, 4)])
        assert value.contains(Fraction(16, 5))

    def test_mixed_point(self):
        """Test 1/(w·u + r·v) at (1/4, 1/4) for n=3"""
        value = simplex_integrand(PeriodSpec(3, form=MIXED_I0), [Fraction(1, 4), Fraction(1, 4)])
        assert value.contains(Fraction(32, 9))

    def test_simplex_boundary(self):
        """Test that boundary points are singular"""
        with pytest.raises(SingularPointError):
            simplex_integrand(PeriodSpec(3), [Fraction(0), Fraction(1, 2)])
        with pytest.raises(SingularPointError):
            simplex_integrand(PeriodSpec(3), [Fraction(1, 2), Fraction(1, 2)])
        with pytest.raises(DomainError):
            simplex_integrand(PeriodSpec(3), [Fraction(1, 4)])
        with pytest.raises(DomainError):
            simplex_integrand(PeriodSpec(3, form=LOG_KERNEL), [Fraction(1, 4)])

    @pytest.mark.parametrize("x", [Fraction(1, 2), Fraction(1, 10), Fraction(1, 1000)])
    def test_log_kernel_point(self, x):
        """Test 4·log((1+x)/(1-x))/(1+3x²) for n=3"""
        prec = Precision(30)
        value = log_kernel_integrand(PeriodSpec(3, form=LOG_KERNEL), [x], prec)
        with mp.workprec(prec.bits + 20):
            xf = mpf(x.numerator) / x.denominator
            expected = 4 * mpmath.log((1 + xf) / (1 - xf)) / (1 + 3 * xf ** 2)
            assert abs(value.value - expected) < mpf(10) ** (-30) * abs(expected)

    def test_log_kernel_region(self):
        """Test points outside the region and on its boundary"""
        spec = PeriodSpec(4, form=LOG_KERNEL)
        with pytest.raises(DomainError):
            log_kernel_integrand(spec, [Fraction(1, 2), Fraction(1, 2)], Precision(20))
        with pytest.raises(SingularPointError):
            log_kernel_integrand(spec, [Fraction(0), Fraction(1, 2)], Precision(20))
        with pytest.raises(DomainError):
            log_kernel_integrand(PeriodSpec(4), [Fraction(1, 4)], Precision(20))


class TestEvaluate:
    """Test period integrals against direct Bessel quadrature"""

    def test_log_kernel_n3(self):
        """Test the one-dimensional log-kernel form of ∫uK₀³ at 40 digits"""
        prec = Precision(40)
        result = evaluate_period(PeriodSpec(3, form=LOG_KERNEL), prec)
        assert result.mode == DETERMINISTIC
        assert result.certified
        direct = moment(BesselProduct(1, 3), prec)
        assert (result.moment_value.value - direct.value).contains(0, Fraction(1, 10 ** 35))

    def test_log_kernel_n3_p3(self):
        """Test the p=3 log-kernel form of ∫u³K₀³"""
        prec = Precision(30)
        result = evaluate_period(PeriodSpec(3, p=3, form=LOG_KERNEL), prec)
        direct = moment(BesselProduct(3, 3), prec)
        assert (result.moment_value.value - direct.value).contains(0, Fraction(1, 10 ** 25))

    def test_raw_simplex_n3(self):
        """Test the two-dimensional simplex form of ∫uK₀³"""
        check = cross_validate(PeriodSpec(3, form=RAW_SIMPLEX), Precision(15))
        assert abs(check.difference.value) < mpf(10) ** (-10)

    def test_log_kernel_n4(self):
        """Test the two-dimensional log-kernel form against 7ζ(3)/8"""
        result = evaluate_period(PeriodSpec(4, form=LOG_KERNEL), Precision(15))
        with mp.workdps(30):
            assert abs(result.moment_value.value.value - 7 * mpmath.zeta(3) / 8) < mpf(10) ** (-10)

    def test_mixed_n3(self):
        """Test the mixed form of ∫uI₀K₀³"""
        check = cross_validate(PeriodSpec(3, form=MIXED_I0), Precision(15))
        assert abs(check.difference.value) < mpf(10) ** (-10)
        assert check.as_dict(10)["form"] == MIXED_I0

    def test_result_dict(self):
        """Test the report fields of a period result"""
        result = evaluate_period(PeriodSpec(3, form=LOG_KERNEL), Precision(20))
        data = result.as_dict(15)
        assert data["dimension"] == 1
        assert data["normalization"] == "1/4"
        assert data["certified"] is True

    def test_unknown_mode(self):
        """Test that an unknown mode is rejected"""
        with pytest.raises(DomainError):
            evaluate_period(PeriodSpec(3), Precision(20), mode="nope")

    def test_qmc_needs_two_randomizations(self):
        """Test that a single randomization has no error bar"""
        with pytest.raises(DomainError):
            evaluate_period(PeriodSpec(4, form=LOG_KERNEL), mode=QMC, log2_samples=8, randomizations=1)

    def test_qmc_is_reproducible(self):
        """Test that the same seed gives the same estimate"""
        spec = PeriodSpec(4, form=LOG_KERNEL)
        first = evaluate_period(spec, mode=QMC, log2_samples=10, randomizations=4, seed=7)
        second = evaluate_period(spec, mode=QMC, log2_samples=10, randomizations=4, seed=7)
        assert first.integral.value.value == second.integral.value.value
        assert not first.certified
        assert first.evaluations == 4 * 2 ** 10

    @pytest.mark.slow
    def test_qmc_n5(self):
        """Test the three-dimensional log-kernel form of ∫uK₀⁵ by QMC"""
        result = evaluate_period(PeriodSpec(5, form=LOG_KERNEL), mode=QMC, log2_samples=14, seed=1)
        direct = moment(BesselProduct(1, 5), Precision(20)).value.value
        assert abs(result.moment_value.value.value - direct) < 1e-3 * abs(direct)

    def test_log_square_identity(self):
        """Test ∫₀¹[(1/x)L² - 4((1-x²)/x)F²]dx = 3"""
        residual = verify_appendixA_identity(Precision(40))
        assert residual.value < mpf(10) ** (-35)
