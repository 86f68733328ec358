"""
Tests for core - 特殊函数、区间数与闭式表达式
"""
import random
from fractions import Fraction

import mpmath
import pytest
from mpmath import mp, mpf

from core.closed_form import PI, PSI1_DIFF, Rational, from_dict, get_symbol_registry, zeta_symbol
from core.errors import DomainError, LabError
from core.numbers import BigReal, Precision
from core.specfun import (asymptotic_bessel_k, bessel_i, bessel_k, digamma_at_one, pi_value, polygamma1,
                          series_bessel, use_asymptotic, zeta, _series_bits)


PREC = Precision(50)


def assert_close(value: BigReal, expected, digits: int = 48):
    with mp.workprec(value.prec_bits):
        assert abs(value.value - expected) < mpf(10) ** (-digits)
        assert value.contains(expected, mpf(10) ** (-digits))


class TestPrecision:
    """Test Precision and BigReal"""

    def test_bits_cover_guard_digits(self):
        """Test that working bits include the guard digits"""
        assert Precision(50).bits > Precision(40).bits
        assert Precision(50, guard_digits=20).bits > Precision(50).bits

    def test_raised(self):
        """Test raising the target digits"""
        assert Precision(30).raised(10).target_digits == 40

    def test_exact_rational(self):
        """Test that exact rationals have zero radius"""
        x = BigReal.exact(Fraction(1, 3), PREC.bits)
        assert x.radius < mpf(2) ** (-PREC.bits + 2)
        assert x.contains(Fraction(1, 3))

    def test_arithmetic_propagates_radius(self):
        """Test that the radius grows through arithmetic"""
        a = BigReal(mpf(1), mpf("1e-20"), PREC.bits)
        b = BigReal(mpf(2), mpf("1e-20"), PREC.bits)
        total = a + b
        assert total.radius >= mpf("2e-20")
        product = a * b
        assert product.radius >= mpf("3e-20")
        assert (a - a).contains(0)

    def test_negation_is_exact_at_ambient_precision(self):
        """Test that -x and abs(x) keep every bit while mp.prec is 53"""
        assert mp.prec == 53
        x = zeta(3, Precision(60))
        negated = -x
        assert negated.value == mpmath.fneg(x.value, exact=True)
        assert -negated.value == x.value
        assert abs(negated).value == x.value
        assert negated.prec_bits == x.prec_bits

    def test_subtraction_at_ambient_precision(self):
        """Test that ζ(3) - ζ(3)/3 certifies 2ζ(3)/3 to 55 digits while mp.prec is 53"""
        assert mp.prec == 53
        prec = Precision(60)
        difference = zeta(3, prec) - zeta(3, prec) * Fraction(1, 3)
        with mp.workprec(prec.bits + 40):
            expected = 2 * mpmath.zeta(3) / 3
        assert difference.contains(expected)
        with mp.workprec(prec.bits):
            assert difference.radius < mpf(10) ** (-55)
            assert abs(difference.value - expected) < mpf(10) ** (-55)

    def test_division_by_interval_containing_zero(self):
        """Test that dividing by an interval containing 0 raises"""
        a = BigReal(mpf(1), mpf(0), PREC.bits)
        with pytest.raises(ZeroDivisionError):
            a / BigReal(mpf("1e-30"), mpf("1e-20"), PREC.bits)

    def test_to_decimal(self):
        """Test decimal output"""
        third = BigReal.exact(Fraction(1, 3), PREC.bits)
        assert third.to_decimal(10) == "0.3333333333"


class TestBessel:
    """Test K_ν and I_ν against mpmath"""

    @pytest.mark.parametrize("x", ["0.001", "0.5", "1", "7.25", "30", "80"])
    def test_bessel_k0(self, x):
        """Test K₀ over small, medium and asymptotic arguments"""
        xv = Fraction(x)
        value = bessel_k(0, xv, PREC)
        with mp.workprec(PREC.bits + 40):
            expected = mpmath.besselk(0, mpf(xv.numerator) / xv.denominator)
            assert abs(value.value - expected) <= value.radius + mpf(10) ** (-50)
        assert value.radius <= PREC.tolerance

    @pytest.mark.parametrize("x", ["0.01", "2", "40"])
    def test_bessel_k1(self, x):
        """Test K₁"""
        xv = Fraction(x)
        value = bessel_k(1, xv, PREC)
        with mp.workprec(PREC.bits + 40):
            expected = mpmath.besselk(1, mpf(xv.numerator) / xv.denominator)
            assert abs(value.value - expected) <= value.radius + mpf(10) ** (-50)

    @pytest.mark.parametrize("nu", [0, 1])
    def test_bessel_i(self, nu):
        """Test I₀ and I₁ at a moderate argument"""
        value = bessel_i(nu, 3, PREC)
        with mp.workprec(PREC.bits + 40):
            expected = mpmath.besseli(nu, 3)
            assert abs(value.value - expected) < mpf(10) ** (-45)

    def test_wronskian(self):
        """Test I₀K₁ + I₁K₀ = 1/x"""
        for x in (Fraction(3, 10), Fraction(2), Fraction(11)):
            w = bessel_i(0, x, PREC) * bessel_k(1, x, PREC) + bessel_i(1, x, PREC) * bessel_k(0, x, PREC)
            with mp.workprec(PREC.bits):
                assert abs(w.value - mpf(x.denominator) / x.numerator) < mpf(10) ** (-45)

    def test_wronskian_random_points(self):
        """Test that the combined radius of I₀K₁ + I₁K₀ contains 1/x on random points in (0, 30]"""
        rng = random.Random(20240607)
        prec = Precision(30)
        for _ in range(12):
            x = Fraction(rng.randint(1, 30000), 1000)
            w = bessel_i(0, x, prec) * bessel_k(1, x, prec) + bessel_i(1, x, prec) * bessel_k(0, x, prec)
            assert w.contains(1 / x, mpf(10) ** (-prec.target_digits - 5)), f"x = {x}"

    def test_monotonicity(self):
        """Test that K₀, K₁ decrease, I₀, I₁ increase and K₁ > K₀ on a grid"""
        prec = Precision(30)
        grid = [Fraction(k, 4) for k in range(1, 60, 5)]
        k0 = [bessel_k(0, x, prec) for x in grid]
        k1 = [bessel_k(1, x, prec) for x in grid]
        i0 = [bessel_i(0, x, prec) for x in grid]
        i1 = [bessel_i(1, x, prec) for x in grid]

        def strictly_less(a: BigReal, b: BigReal) -> bool:
            with mp.workprec(min(a.prec_bits, b.prec_bits)):
                return b.value - a.value > a.radius + b.radius

        for a in range(len(grid) - 1):
            b = a + 1
            assert strictly_less(k0[b], k0[a])
            assert strictly_less(k1[b], k1[a])
            assert strictly_less(i0[a], i0[b])
            assert strictly_less(i1[a], i1[b])
        for small, large in zip(k0, k1):
            assert strictly_less(small, large)

    @pytest.mark.parametrize("x", [80, 100, 130])
    def test_series_asymptotic_crossover(self, x):
        """Test that the series and the asymptotic branch agree where the asymptotic branch is taken"""
        bits = PREC.bits
        xv = mpf(x)
        assert use_asymptotic(xv, bits, PREC.target_digits)
        for nu in (0, 1):
            asymptotic = asymptotic_bessel_k(nu, xv, bits)
            assert asymptotic is not None
            value, radius = asymptotic
            _, _, k0, k1, err = series_bessel(xv, _series_bits(xv, bits, for_k=True))
            series = k0 if nu == 0 else k1
            with mp.workprec(bits + 40):
                assert abs(value - series) <= radius + err + abs(series) * mpf(2) ** (4 - bits)

    def test_crossover_threshold(self):
        """Test that small arguments never take the asymptotic branch"""
        assert not use_asymptotic(mpf(10), PREC.bits, PREC.target_digits)
        assert not use_asymptotic(mpf(40), PREC.bits, PREC.target_digits)

    def test_domain(self):
        """Test invalid arguments"""
        with pytest.raises(DomainError):
            bessel_k(0, 0, PREC)
        with pytest.raises(DomainError):
            bessel_k(0, -1, PREC)
        with pytest.raises(DomainError):
            bessel_i(0, -1, PREC)
        with pytest.raises(DomainError):
            bessel_k(2, 1, PREC)

    def test_domain_error_is_value_error(self):
        """Test that domain errors keep ValueError compatibility"""
        with pytest.raises(ValueError):
            bessel_k(0, 0, PREC)
        assert issubclass(DomainError, LabError)

    def test_i_at_zero(self):
        """Test I₀(0) = 1 and I₁(0) = 0"""
        assert bessel_i(0, 0, PREC).value == 1
        assert bessel_i(1, 0, PREC).value == 0


class TestConstants:
    """Test ζ, ψ₁ and the Euler constant"""

    @pytest.mark.parametrize("s", [2, 3, 5, 7])
    def test_zeta(self, s):
        """Test ζ(s) against mpmath"""
        with mp.workprec(PREC.bits + 40):
            expected = mpmath.zeta(s)
        assert_close(zeta(s, PREC), expected)

    def test_zeta_domain(self):
        """Test ζ(1) is rejected"""
        with pytest.raises(DomainError):
            zeta(1, PREC)

    @pytest.mark.parametrize("z", [Fraction(1, 3), Fraction(2, 3), Fraction(1), Fraction(7, 2)])
    def test_polygamma1(self, z):
        """Test ψ₁ against mpmath"""
        with mp.workprec(PREC.bits + 40):
            expected = mpmath.psi(1, mpf(z.numerator) / z.denominator)
        assert_close(polygamma1(z, PREC), expected)

    def test_polygamma1_domain(self):
        """Test ψ₁(0) is rejected"""
        with pytest.raises(DomainError):
            polygamma1(0, PREC)

    def test_digamma_and_pi(self):
        """Test ψ₀(1) = -γ and π"""
        with mp.workprec(PREC.bits + 40):
            assert_close(digamma_at_one(PREC), -mp.euler)
            assert_close(pi_value(PREC), +mp.pi)


class TestClosedForm:
    """Test closed-form expression trees"""

    def test_evaluate_seven_eighths_zeta3(self):
        """Test 7/8·ζ(3)"""
        expr = Rational(Fraction(7, 8)) * zeta_symbol(3)
        with mp.workprec(PREC.bits + 40):
            expected = 7 * mpmath.zeta(3) / 8
        assert_close(expr.evaluate(PREC), expected)

    def test_psi1_difference(self):
        """Test the ψ₁(1/3) - ψ₁(2/3) symbol"""
        with mp.workprec(PREC.bits + 40):
            expected = mpmath.psi(1, mpf(1) / 3) - mpmath.psi(1, mpf(2) / 3)
        assert_close(PSI1_DIFF.evaluate(PREC), expected)

    def test_dict_round_trip(self):
        """Test that serialization preserves the value"""
        expr = PI / 2 + Rational(Fraction(3, 2)) * zeta_symbol(2)
        restored = from_dict(expr.to_dict())
        assert str(restored) == str(expr)
        assert (restored.evaluate(PREC) - expr.evaluate(PREC)).contains(0)

    def test_unknown_symbol(self):
        """Test that unknown symbols raise DomainError"""
        with pytest.raises(DomainError):
            get_symbol_registry().evaluate("nope", (), PREC)

    def test_registry_lists_defaults(self):
        """Test the default symbol table"""
        names = [s["name"] for s in get_symbol_registry().list_symbols()]
        for name in ("zeta", "psi1", "pi", "euler"):
            assert name in names
