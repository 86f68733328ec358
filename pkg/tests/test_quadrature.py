"""
Tests for quadrature - Bessel 矩的高精度求积
"""
import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from core.errors import DivergenceError, DomainError
from core.numbers import Precision
from quadrature import (BesselProduct, BesselSum, closed_form_table, family_f, family_g, find_closed_form,
                        i_rho2_alpha6, integrate_unit_interval, large_n_limits, moment, nested_moment,
                        next_to_last_sides, normalized_moment, symmetric_nested)


class TestBesselProduct:
    """Test BesselProduct bookkeeping"""

    def test_parse(self):
        """Test parsing p,a,b,c,d with missing powers"""
        assert BesselProduct.parse("1,4") == BesselProduct(1, 4, 0, 0, 0)
        assert BesselProduct.parse("1, 3, 0, 1") == BesselProduct(1, 3, 0, 1)

    def test_parse_invalid(self):
        """Test that malformed products are rejected"""
        with pytest.raises(DomainError):
            BesselProduct.parse("1,x")
        with pytest.raises(DomainError):
            BesselProduct.parse("1,2,3,4,5,6")
        with pytest.raises(DomainError):
            BesselProduct(-1, 2)

    def test_str(self):
        """Test the readable form"""
        assert str(BesselProduct(1, 4)) == "u*K0^4"
        assert str(BesselProduct(3, 2, 1, 0, 1)) == "u^3*K0^2*K1*I1"

    def test_divergence_at_zero(self):
        """Test that u^p·K₁^b with p-b+d <= -1 diverges at 0"""
        with pytest.raises(DivergenceError) as info:
            moment(BesselProduct(0, 0, 1), Precision(20))
        assert info.value.endpoint == "0"

    def test_divergence_at_infinity(self):
        """Test that products without exponential decay diverge at infinity"""
        with pytest.raises(DivergenceError) as info:
            moment(BesselProduct(1, 1, 0, 1), Precision(20))
        assert info.value.endpoint == "inf"

    def test_integrable_with_k1(self):
        """Test that ∫K₁²·u² is accepted (p-b+d = 0)"""
        assert BesselProduct(2, 0, 2).divergence() is None

    def test_zero_sum(self):
        """Test that a sum with zero coefficients integrates to zero"""
        f = BesselSum.of((0, BesselProduct(1, 2)), (0, BesselProduct(3, 4)))
        assert f.is_zero
        assert moment(f, Precision(20)).value.value == 0


class TestMoment:
    """Test moments against closed forms and mpmath"""

    def test_u_k0_is_one(self):
        """Test ∫uK₀ = 1"""
        result = moment(BesselProduct(1, 1), Precision(30))
        assert result.value.contains(1, Fraction(1, 10 ** 28))

    def test_k0_is_half_pi(self):
        """Test ∫K₀ = π/2 (logarithmic endpoint)"""
        prec = Precision(30)
        result = moment(BesselProduct(0, 1), prec)
        with mp.workprec(prec.bits):
            assert abs(result.value.value - mp.pi / 2) < mpf(10) ** (-28)

    def test_u_k0_cubed_against_mpmath_quad(self):
        """Test ∫uK₀³ against mpmath.quad at low precision"""
        result = moment(BesselProduct(1, 3), Precision(20))
        with mp.workdps(25):
            expected = mpmath.quad(lambda u: u * mpmath.besselk(0, u) ** 3, [0, 1, mpmath.inf])
            assert abs(result.value.value - expected) < mpf(10) ** (-15)

    def test_normalized_moment(self):
        """Test I_{n,j} = ∫u^{n+1}K₀^{κ-j}K₁^j / n!"""
        prec = Precision(25)
        direct = moment(BesselProduct(3, 4), prec).scaled(Fraction(1, 2))
        assert (normalized_moment(4, 2, 0, prec).value - direct.value).contains(0, Fraction(1, 10 ** 23))

    def test_normalized_moment_index_range(self):
        """Test that j > κ is rejected"""
        with pytest.raises(DomainError):
            normalized_moment(4, 2, 5, Precision(20))

    def test_unit_interval(self):
        """Test ∫₀¹ log(1/x) dx = 1 with the endpoint singularity"""
        prec = Precision(30)
        result = integrate_unit_interval(lambda x, xc: -mpmath.log(x), prec)
        assert result.value.contains(1, Fraction(1, 10 ** 28))

    def test_find_closed_form(self):
        """Test the summary table lookup"""
        assert str(find_closed_form(BesselProduct(1, 4))) == "7/8*zeta(3)"
        assert find_closed_form(BesselProduct(1, 5)) is None
        assert len(closed_form_table()) == 7

    @pytest.mark.slow
    @pytest.mark.parametrize("entry", closed_form_table(), ids=lambda e: e.label)
    def test_closed_form_table(self, entry):
        """Test every summary-table entry to 50 digits"""
        prec = Precision(50)
        residual = moment(entry.integrand, prec).value - entry.target.evaluate(prec)
        assert residual.contains(0, Fraction(1, 10 ** 45))


class TestNested:
    """Test nested moments"""

    @pytest.mark.slow
    def test_i_rho2_alpha6_forms_agree(self):
        """Test that the three rewrites give the same value"""
        prec = Precision(25)
        values = [i_rho2_alpha6(prec, form).value for form in ("original", "wronskian", "reduced")]
        for other in values[1:]:
            assert (values[0] - other).contains(0, Fraction(1, 10 ** 20))

    @pytest.mark.slow
    def test_next_to_last_transform(self):
        """Test both sides of the next-to-last-term transform"""
        lhs, rhs = next_to_last_sides(Precision(25))
        assert (lhs.value - rhs.value).contains(0, Fraction(1, 10 ** 20))

    def test_shuffle_relation(self):
        """Test ζ̃(f,g) + ζ̃(g,f) = ∫f·∫g for f = uK₀², g = uK₀"""
        prec = Precision(20)
        f, g = BesselProduct(1, 2), BesselProduct(1, 1)
        total = nested_moment(f, g, prec).value + nested_moment(g, f, prec).value
        assert total.contains(Fraction(1, 2), Fraction(1, 10 ** 17))

    def test_shuffle_random_family_pairs(self):
        """Test ζ̃(f_n,g_m) + ζ̃(g_m,f_n) = ∫f_n·∫g_m on random pairs from the f/g families"""
        rng = random.Random(314159)
        prec = Precision(15)
        for _ in range(3):
            n, m = rng.randint(2, 7), rng.randint(1, 7)
            f, g = family_f(n), family_g(m)
            total = nested_moment(f, g, prec).value + nested_moment(g, f, prec).value
            product = moment(f, prec).value * moment(g, prec).value
            assert (total - product).contains(0, Fraction(1, 10 ** 12)), f"n = {n}, m = {m}"

    def test_unknown_form(self):
        """Test that an unknown rewrite is rejected"""
        with pytest.raises(DomainError):
            i_rho2_alpha6(Precision(20), "nope")

    @pytest.mark.slow
    def test_symmetric_nested_is_symmetric(self):
        """Test ζ̃(f_n,g_m)+ζ̃(f_m,g_n) is symmetric in (n, m)"""
        prec = Precision(20)
        a = symmetric_nested(3, 1, prec).value
        b = symmetric_nested(1, 3, prec).value
        assert (a - b).contains(0, Fraction(1, 10 ** 18))


class TestLimits:
    """Test the large-n limits"""

    def test_limits_values(self):
        """Test e^{-2γ} and 2e^{-γ}"""
        report = large_n_limits([2, 4], Precision(20))
        with mp.workprec(report.moment_limit.prec_bits):
            assert abs(report.moment_limit.value - mpmath.exp(-2 * mp.euler)) < mpf(10) ** (-18)
            assert abs(report.k0_limit.value - 2 * mpmath.exp(-mp.euler)) < mpf(10) ** (-18)

    def test_first_ratios(self):
        """Test 2^{n-1}∫uK₀ⁿ/n! at n=2 equals 1/2 and ∫K₀/1! at n=1 equals π/2"""
        report = large_n_limits([1, 2], Precision(20))
        assert report.n_values == [1, 2]
        assert report.moment_ratios[1].contains(Fraction(1, 2), Fraction(1, 10 ** 18))
        with mp.workprec(report.k0_ratios[0].prec_bits):
            assert abs(report.k0_ratios[0].value - mp.pi / 2) < mpf(10) ** (-18)

    @pytest.mark.slow
    def test_gaps_shrink(self):
        """Test that both sequences approach their limits monotonically"""
        report = large_n_limits([4, 8, 16], Precision(20))
        assert report.moment_monotone
        assert report.k0_monotone
