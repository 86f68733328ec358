"""
Tests for contfrac - 连分数编目、渐近分数与递推
"""
import math
from fractions import Fraction

import pytest
from mpmath import mp, mpf

from core.errors import DomainError
from core.numbers import Precision
from core.specfun import zeta
from contfrac import (APERY_VARIANTS, KAPPA4_RESCALING, PROVED, PSLQ_CONJECTURAL, HolonomicRecurrence, IntPoly,
                      apery_closed_forms, binomial_part, catalog, cf_value, cf_value_exact, chain_tail_profile,
                      characteristic_roots, convergence_exponent, convergents, derive_recurrence,
                      export_catalog_json, first_valid_k, get_entry, higher_order_recurrence,
                      load_catalog_json, published_recurrence, replay_residuals, rescale_recurrence, z_at,
                      z_chain_from_moments)


class TestCatalog:
    """Test the continued-fraction catalog"""

    def test_entries(self):
        """Test the catalog size and provenance tags"""
        entries = catalog()
        assert len(entries) == 9
        assert all(spec.provenance in (PROVED, PSLQ_CONJECTURAL) for spec in entries)
        assert get_entry("zeta3_pslq").provenance == PSLQ_CONJECTURAL
        assert get_entry("zeta3_apery").provenance == PROVED

    def test_unknown_entry(self):
        """Test that an unknown name is rejected"""
        with pytest.raises(DomainError):
            get_entry("zeta4_nope")

    def test_json_round_trip(self):
        """Test that export and load preserve names and polynomials"""
        restored = load_catalog_json(export_catalog_json())
        assert [spec.name for spec in restored] == [spec.name for spec in catalog()]
        for original, loaded in zip(catalog(), restored):
            assert loaded.numerator == original.numerator
            assert loaded.denominator == original.denominator
            assert str(loaded.target) == str(original.target)

    def test_load_rejects_other_versions(self):
        """Test that a foreign schema version is rejected"""
        with pytest.raises(DomainError):
            load_catalog_json('{"schema_version": 99, "entries": []}')

    def test_recurrence_signs(self):
        """Test B = D and A = -N for the paired recurrence"""
        spec = get_entry("zeta3_kappa4")
        rec = spec.recurrence()
        assert rec.b(1) == spec.denominator(1) == 36
        assert rec.a(1) == 16

    def test_polynomial_from_expr(self):
        """Test sympy parsing of the catalog polynomials"""
        poly = IntPoly.from_expr("(2*k+1)*(17*k**2+17*k+5)")
        assert poly.degree == 3
        assert poly(1) == 117
        assert poly.leading == 34


class TestEvaluate:
    """Test continued-fraction values and convergents"""

    @pytest.mark.parametrize("spec", catalog(), ids=lambda s: s.name)
    def test_cf_value_matches_target(self, spec):
        """Test every catalog entry against its closed form at depth 300"""
        prec = Precision(40)
        value = cf_value(spec, 300, prec)
        target = spec.target.evaluate(prec)
        with mp.workprec(prec.bits):
            assert abs(value.value - target.value) < mpf(10) ** (-30)

    @pytest.mark.parametrize("spec", catalog(), ids=lambda s: s.name)
    def test_cf_recurrence_duality(self, spec):
        """Test that the depth-d continued fraction equals p/q of the paired recurrence at k = start+d+1"""
        rec = spec.recurrence()
        seq = convergents(rec, spec.start_k + 42)
        for depth in range(1, 41):
            assert cf_value_exact(spec, depth) == seq.ratio(spec.start_k + depth + 1), f"depth {depth}"

    def test_exact_value_is_rational(self):
        """Test the depth-1 continued fraction N(1)/D(1)"""
        spec = get_entry("zeta3_apery")
        assert cf_value_exact(spec, 1) == Fraction(-1, 117)
        with pytest.raises(DomainError):
            cf_value_exact(spec, 0)

    def test_apery_convergents(self):
        """Test p/q with initial values (0,6) and (1,5) for Apéry's ζ(3) recurrence"""
        rec = get_entry("zeta3_apery").recurrence()
        seq = convergents(rec, 20, numerator_init=(0, 6), denominator_init=(1, 5))
        assert seq.pair(2) == (702, 584)
        limit = seq.ratio(20)
        prec = Precision(40)
        with mp.workprec(prec.bits):
            assert abs(mpf(limit.numerator) / limit.denominator - zeta(3, prec).value) < mpf(10) ** (-30)

    def test_normalize_keeps_ratios(self):
        """Test that normalising the tail leaves the ratios unchanged"""
        rec = get_entry("zeta3_apery").recurrence()
        plain = convergents(rec, 15, (0, 6), (1, 5))
        scaled = convergents(rec, 15, (0, 6), (1, 5), normalize=True)
        assert plain.ratio(15) == scaled.ratio(15)

    def test_convergents_too_short(self):
        """Test that k_max below start+2 is rejected"""
        with pytest.raises(DomainError):
            convergents(get_entry("zeta3_apery").recurrence(), 1)

    @pytest.mark.parametrize("name,expected", [
        ("zeta3_apery", (17 + 12 * 2 ** 0.5, 17 - 12 * 2 ** 0.5)),
        ("zeta3_kappa4", (8.0, 2.0)),
        ("psi1_kappa3", (9.0, 1.0)),
        ("zeta2_apery", ((11 + 125 ** 0.5) / 2, (11 - 125 ** 0.5) / 2)),
    ])
    def test_characteristic_roots(self, name, expected):
        """Test the limiting roots of λ² - bλ + a"""
        roots = characteristic_roots(get_entry(name).recurrence(), k_max=60)
        assert roots.roots == pytest.approx(expected, abs=1e-3)

    def test_empirical_dominant_root(self):
        """Test that q(k+1)/(q(k)k³) approaches the dominant root"""
        roots = characteristic_roots(get_entry("zeta3_apery").recurrence(), k_max=200)
        assert roots.empirical == pytest.approx(roots.roots[0], rel=1e-2)

    def test_characteristic_roots_degree_mismatch(self):
        """Test that deg A != 2·deg B is rejected"""
        spec = get_entry("zeta2_4k")
        rec = spec.recurrence()
        bad = type(rec)(rec.b, IntPoly((1, 1)), rec.start)
        with pytest.raises(DomainError):
            characteristic_roots(bad)

    def test_convergence_exponent(self):
        """Test that Apéry's approximations converge faster than q⁻¹"""
        prec = Precision(80)
        fit = convergence_exponent(get_entry("zeta3_apery").recurrence(), zeta(3, prec), 30,
                                   numerator_init=(0, 6), denominator_init=(1, 5), prec=prec)
        assert not fit.degenerate
        assert fit.points >= 3
        assert fit.fast_enough
        assert fit.slope > 1.5

    def test_convergence_exponent_needs_depth(self):
        """Test that k_max < 10 is rejected"""
        with pytest.raises(DomainError):
            convergence_exponent(get_entry("zeta3_apery").recurrence(), zeta(3, Precision(20)), 5)


class TestApery:
    """Test the binomial-sum closed forms"""

    def test_binomial_parts(self):
        """Test the first integer sums"""
        assert [binomial_part(k, "zu1") for k in range(4)] == [1, 4, 40, 544]
        assert [binomial_part(k, "zu2") for k in range(4)] == [1, 4, 28, 256]
        assert [binomial_part(k, "apery") for k in range(3)] == [1, 5, 73]

    def test_closed_form_values(self):
        """Test y(k) including the k!³ factor"""
        assert [apery_closed_forms(k, "zu1") for k in range(4)] == [1, 1, 20, 1836]
        assert [apery_closed_forms(k, "zu2") for k in range(4)] == [1, 2, 56, 6912]
        assert apery_closed_forms(2, "apery") == 73

    @pytest.mark.parametrize("variant", ["zu1", "zu2"])
    def test_factorization_up_to_100(self, variant):
        """Test y(k) = k!³·S(k)/2^(ck) against the paired recurrence for every k <= 100"""
        info = APERY_VARIANTS[variant]
        seq = convergents(info.recurrence(), 100, numerator_init=info.initial, denominator_init=info.initial)
        for k in range(101):
            y = seq.numerators[k]
            assert y == apery_closed_forms(k, variant), f"k = {k}"
            part = y * 2 ** (info.power_of_two * k) / math.factorial(k) ** 3
            assert part.denominator == 1
            assert part == binomial_part(k, variant)

    @pytest.mark.parametrize("variant", sorted(APERY_VARIANTS))
    def test_replay_residuals_vanish(self, variant):
        """Test that the closed forms satisfy their paired recurrences"""
        residuals = replay_residuals(variant, 30)
        assert len(residuals) == 29
        assert all(r == 0 for r in residuals)

    def test_unknown_variant(self):
        """Test that an unknown variant is rejected"""
        with pytest.raises(DomainError):
            binomial_part(3, "zu9")
        with pytest.raises(DomainError):
            apery_closed_forms(-1)


class TestChains:
    """Test continued fractions built from moment decompositions"""

    @pytest.mark.parametrize("kappa", [3, 4])
    def test_chain_reaches_closed_form(self, kappa):
        """Test that iterating down to k=0 gives the expected Möbius form"""
        result = z_chain_from_moments(kappa, Precision(30))
        assert result.matches
        assert result.z0.equivalent(result.expected)

    def test_chain_value_matches_catalog(self):
        """Test z(0) for κ=4 against 12/(7ζ(3)) - 2"""
        prec = Precision(30)
        result = z_chain_from_moments(4, prec)
        target = get_entry("zeta3_kappa4").target.evaluate(prec)
        assert (result.value - target).contains(0, Fraction(1, 10 ** 20))

    def test_z_at_start(self):
        """Test that z(k) is a non-degenerate Möbius map"""
        z = z_at(4, 3)
        assert (z.gamma, z.delta) != (0, 0)

    def test_unsupported_kappa(self):
        """Test that chains exist only for κ = 3, 4"""
        with pytest.raises(DomainError):
            z_chain_from_moments(5, Precision(20))

    @pytest.mark.slow
    def test_kappa4_tail(self):
        """Test z(k)/k³ tends to -2 for κ=4"""
        profile = chain_tail_profile(4, [8, 12, 16, 20], Precision(20))
        assert profile.expected == -2
        assert profile.extrapolated == pytest.approx(-2, abs=0.1)

    def test_tail_needs_two_points(self):
        """Test that a single k is rejected"""
        with pytest.raises(DomainError):
            chain_tail_profile(3, [5], Precision(20))


class TestHigherOrder:
    """Test higher-order recurrences for x(k) = I_{2k,0}"""

    def test_kappa4_matches_published(self):
        """Test the derived κ=4 recurrence against the known form"""
        assert derive_recurrence(4).is_equivalent(published_recurrence(4))

    def test_kappa4_rescales_to_three_term(self):
        """Test that rescaling by 8^k(2k)!k! gives the catalog recurrence"""
        rescaled = rescale_recurrence(derive_recurrence(4), KAPPA4_RESCALING)
        three_term = HolonomicRecurrence.from_three_term(get_entry("zeta3_kappa4").recurrence())
        assert rescaled.is_equivalent(three_term)

    def test_equivalence_is_strict(self):
        """Test that different recurrences are not equivalent"""
        kappa4 = HolonomicRecurrence.from_three_term(get_entry("zeta3_kappa4").recurrence())
        apery = HolonomicRecurrence.from_three_term(get_entry("zeta3_apery").recurrence())
        assert not kappa4.is_equivalent(apery)

    def test_first_valid_k(self):
        """Test the lowest index where the recurrence holds"""
        assert first_valid_k(3) == 1
        assert first_valid_k(4) == 2
        assert first_valid_k(8) == 4

    def test_unsupported_kappa(self):
        """Test that κ outside 3..8 and missing published forms are rejected"""
        with pytest.raises(DomainError):
            derive_recurrence(9)
        with pytest.raises(DomainError):
            published_recurrence(6)

    def test_kappa4_residuals(self):
        """Test the κ=4 recurrence on quadrature values"""
        report = higher_order_recurrence(4, Precision(30), k_values=[2, 3], tolerance_digits=20)
        assert report.matches_published
        assert report.passed
        assert report.as_dict()["passed"] is True

    def test_k_below_valid_range(self):
        """Test that k below first_valid_k is rejected"""
        with pytest.raises(DomainError):
            higher_order_recurrence(4, Precision(20), k_values=[1])

    @pytest.mark.slow
    def test_kappa5_residuals(self):
        """Test the κ=5 recurrence at 60 digits"""
        report = higher_order_recurrence(5, Precision(60), tolerance_digits=40)
        assert report.matches_published
        assert report.passed
