"""
Tests for relations - PSLQ 与编目恒等式
"""
import random
from fractions import Fraction

import pytest

from contfrac import PROVED, PSLQ_CONJECTURAL
from core.errors import DomainError, PrecisionError
from core.numbers import BigReal, Precision
from core.specfun import pi_value, zeta
from relations import (Identity, IdentityManager, IntegerRelation, NoRelation, RelationProblem, check_identity,
                       get_identity_manager, integer_vector, pslq, verify_catalog_identities)


PREC = Precision(60)


class TestPslq:
    """Test integer relation detection"""

    def test_planted_relation(self):
        """Test recovery of x = 3ζ(3) - 2π² + 7"""
        z3 = zeta(3, PREC)
        pi2 = pi_value(PREC) * pi_value(PREC)
        one = BigReal.exact(1, PREC.bits)
        x = z3 * 3 - pi2 * 2 + one * 7
        problem = RelationProblem.of([x, z3, pi2, one], ["x", "zeta(3)", "pi^2", "1"], max_coeff=100)
        result = pslq(problem)
        assert isinstance(result, IntegerRelation)
        assert result.coefficients == (1, -3, 2, -7)
        assert result.as_rational() == {"zeta(3)": 3, "pi^2": -2, "1": 7}
        assert result.as_dict()["found"] is True
        assert str(result).startswith("(1)*x")

    def test_no_relation(self):
        """Test that 1 and π have no small relation"""
        problem = RelationProblem.of([BigReal.exact(1, PREC.bits), pi_value(PREC)], max_coeff=1000)
        result = pslq(problem)
        assert isinstance(result, NoRelation)
        assert result.reason in ("bound", "precision", "iterations")
        assert result.as_dict()["found"] is False

    def test_precision_precondition(self):
        """Test that low-precision input is refused with the required digits"""
        low = Precision(20)
        with pytest.raises(PrecisionError) as info:
            RelationProblem.of([zeta(3, low), pi_value(low)], confidence_digits=30)
        assert info.value.required_digits == 40

    def test_problem_shape(self):
        """Test input count and label validation"""
        one = BigReal.exact(1, PREC.bits)
        with pytest.raises(DomainError):
            RelationProblem.of([one])
        with pytest.raises(DomainError):
            RelationProblem.of([one] * 9)
        with pytest.raises(DomainError):
            RelationProblem.of([one, one], labels=["a"])

    def test_zero_input(self):
        """Test that a zero value is rejected"""
        zero = BigReal.exact(0, PREC.bits)
        with pytest.raises(DomainError):
            pslq(RelationProblem.of([zero, pi_value(PREC)], max_coeff=10, confidence_digits=20))


class TestIdentities:
    """Test the identity catalog"""

    def test_integer_vector(self):
        """Test clearing denominators into a canonical vector"""
        assert integer_vector(1, [Fraction(2, 15), Fraction(-1, 5)]) == (15, -2, 3)
        assert integer_vector(-2, [Fraction(1)]) == (2, 1)

    def test_default_identities(self):
        """Test that the default catalog is registered"""
        names = get_identity_manager().names()
        for name in ("zeta5_kappa8", "i_rho2_alpha6", "nested_f3g1", "kappa4_basis", "cf_zeta3_pslq"):
            assert name in names
        assert len(names) == 10
        assert get_identity_manager().get_identity("kappa4_basis").provenance == PROVED

    def test_register_and_unregister(self):
        """Test the manager registry"""
        manager = IdentityManager()
        identity = Identity("planted", ("1", "2"), (2, -1), PSLQ_CONJECTURAL,
                            lambda prec, levels: [BigReal.exact(1, prec.bits), BigReal.exact(2, prec.bits)])
        manager.register(identity)
        assert manager.is_identity_supported("planted")
        assert {"name": "planted", "provenance": PSLQ_CONJECTURAL, "description": ""} in manager.list_identities()
        manager.unregister("planted")
        assert manager.get_identity("planted") is None

    def test_cf_zeta3_identity(self):
        """Test rediscovering 7·z(0) + 7 - 8/ζ(3) = 0"""
        check = check_identity(get_identity_manager().get_identity("cf_zeta3_pslq"), Precision(40))
        assert check.published == (7, 7, -8)
        assert check.matched
        assert check.published_residual.contains(0, Fraction(1, 10 ** 30))

    def test_kappa4_basis_identity(self):
        """Test rediscovering 3 - 4∫uK₀⁴ + 16∫u³K₀⁴ = 0"""
        check = check_identity(get_identity_manager().get_identity("kappa4_basis"), Precision(50))
        assert check.recovered == (3, -4, 16)
        assert check.as_dict()["matched"] is True

    def test_unknown_identity(self):
        """Test that unknown names are rejected before any work"""
        with pytest.raises(DomainError):
            verify_catalog_identities(Precision(30), names=["nope"])

    @pytest.mark.slow
    def test_full_catalog(self):
        """Test every catalogued identity at 60 digits"""
        report = verify_catalog_identities(PREC)
        assert report.passed
        assert report.failures() == []

def _basis(prec: Precision):
    return [zeta(3, prec), pi_value(prec) * pi_value(prec), BigReal.exact(1, prec.bits)]


def _planted(coeffs, prec: Precision) -> BigReal:
    x = BigReal.exact(0, prec.bits)
    for a, v in zip(coeffs, _basis(prec)):
        x = x + v * a
    return x


class TestPslqInvariants:
    """Test PSLQ under scaling, random planted relations and the confidence setting"""

    def test_random_planted_vectors(self):
        """Test recovery of x = a₁ζ(3) + a₂π² + a₃ for random |aᵢ| <= 10⁴"""
        rng = random.Random(1729)
        for _ in range(5):
            coeffs = [rng.choice((-1, 1)) * rng.randint(1, 10 ** 4) for _ in range(3)]
            values = [_planted(coeffs, PREC)] + _basis(PREC)
            result = pslq(RelationProblem.of(values, max_coeff=10 ** 5))
            assert isinstance(result, IntegerRelation), f"coefficients {coeffs}"
            assert result.coefficients == (1, -coeffs[0], -coeffs[1], -coeffs[2])

    @pytest.mark.parametrize("factor", ["rational", "pi"])
    def test_scale_invariance(self, factor):
        """Test that multiplying every input by the same nonzero constant keeps the relation"""
        coeffs = [3, -2, 7]
        values = [_planted(coeffs, PREC)] + _basis(PREC)
        scale = BigReal.exact(Fraction(10 ** 7, 3), PREC.bits) if factor == "rational" else pi_value(PREC)
        plain = pslq(RelationProblem.of(values, max_coeff=100))
        scaled = pslq(RelationProblem.of([v * scale for v in values], max_coeff=100))
        assert isinstance(plain, IntegerRelation)
        assert isinstance(scaled, IntegerRelation)
        assert scaled.coefficients == plain.coefficients == (1, -3, 2, -7)

    def test_confidence_does_not_change_the_relation(self):
        """Test that confidence 40 and 80 return the same vector"""
        prec = Precision(100)
        coeffs = [-1234, 567, 8901]
        values = [_planted(coeffs, prec)] + _basis(prec)
        low = pslq(RelationProblem.of(values, max_coeff=10 ** 5, confidence_digits=40))
        high = pslq(RelationProblem.of(values, max_coeff=10 ** 5, confidence_digits=80))
        assert isinstance(low, IntegerRelation)
        assert isinstance(high, IntegerRelation)
        assert low.coefficients == high.coefficients == (1, 1234, -567, -8901)

    def test_confidence_does_not_invent_a_relation(self):
        """Test that 1 and π stay unrelated at both confidence settings"""
        prec = Precision(100)
        values = [BigReal.exact(1, prec.bits), pi_value(prec)]
        for confidence in (40, 80):
            result = pslq(RelationProblem.of(values, max_coeff=10 ** 4, confidence_digits=confidence))
            assert isinstance(result, NoRelation)



class TestNestedIdentities:
    """Test the symmetric nested-sum identities with a constant term"""

    def test_weight3_slot_is_u_k0_fourth(self):
        """Test that nested_f5g1 pairs its weight-3 coefficient with ∫uK₀⁴ = 7ζ(3)/8"""
        identity = get_identity_manager().get_identity("nested_f5g1")
        assert identity.labels[3:] == ("1", "∫uK0^4", "zeta(5)")
        prec = Precision(20)
        values = identity.evaluate(prec)
        assert (values[4] - zeta(3, prec) * Fraction(7, 8)).contains(0, Fraction(1, 10 ** 18))

    def test_published_residual(self):
        """Test that the published vector of nested_f5g1 annihilates its values and fails with ζ(3)"""
        identity = get_identity_manager().get_identity("nested_f5g1")
        prec = Precision(20)
        values = identity.evaluate(prec)
        residual = BigReal.exact(0, prec.bits)
        for value, a in zip(values, identity.published):
            residual = residual + value * a
        assert residual.contains(0, Fraction(1, 10 ** 12))
        with_zeta3 = residual + (zeta(3, prec) - values[4]) * identity.published[4]
        assert not with_zeta3.contains(0, Fraction(1, 10 ** 3))
