from fractions import Fraction

import pytest

from algebra.errors import DivisionByZero, PoleAtOne, ScalarError
from algebra.scalars import (
    LaurentPoly,
    RatFuncQ,
    ScalarContext,
    rf_add,
    rf_eq,
    rf_inv,
    rf_mul,
    specialize_q1,
    to_fraction,
)


@pytest.fixture
def ctx():
    return ScalarContext(1)


def test_to_fraction_accepts_exact_inputs():
    assert to_fraction(3) == Fraction(3)
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(" -1/2 ") == Fraction(-1, 2)
    assert to_fraction(Fraction(5, 7)) == Fraction(5, 7)


@pytest.mark.parametrize("bad", [True, 0.5, "one half", None])
def test_to_fraction_rejects_inexact_inputs(bad):
    with pytest.raises(ScalarError):
        to_fraction(bad)


class TestLaurentPoly:
    def test_square_of_quantum_two(self):
        two = LaurentPoly.from_dict({1: 1, -1: 1})
        assert two * two == LaurentPoly.from_dict({2: 1, 0: 2, -2: 1})

    def test_zero_coefficients_are_dropped(self):
        poly = LaurentPoly.from_dict({3: 0, 1: 2})
        assert poly.terms == ((1, Fraction(2)),)
        assert not LaurentPoly.from_dict({4: 0})

    def test_evaluate_and_flip(self):
        poly = LaurentPoly.from_dict({2: 1, -1: -3})
        assert poly.evaluate_at_one() == -2
        assert poly.flip() == LaurentPoly.from_dict({-2: 1, 1: -3})

    def test_str_highest_power_first(self):
        assert str(LaurentPoly.from_dict({1: 1, -1: -1})) == "q - q^-1"
        assert str(LaurentPoly.from_dict({1: 1}, unit_L=2)) == "q^(1/2)"
        assert str(LaurentPoly()) == "0"

    def test_mixed_units_raise(self):
        with pytest.raises(ScalarError):
            LaurentPoly.monomial(1, unit_L=2) + LaurentPoly.monomial(1, unit_L=3)


class TestRatFuncQ:
    def test_field_identities(self, ctx):
        q = ctx.q(1)
        assert q / q == 1
        assert q * q.inverse() == ctx.one
        assert (q - q.inverse()) / (q - q.inverse()) == 1
        assert 1 - q == -(q - 1)
        assert 2 * q == q + q

    def test_inverse_of_zero_raises(self, ctx):
        with pytest.raises(DivisionByZero):
            ctx.zero.inverse()
        with pytest.raises(ZeroDivisionError):
            ctx.one / ctx.zero

    def test_canonical_form_gives_equal_hashes(self, ctx):
        q = ctx.q(1)
        a = (q ** 4 - q ** -4) / (q ** 2 - q ** -2)
        b = q ** 2 + q ** -2
        assert a == b
        assert hash(a) == hash(b)
        assert a.num == b.num and a.den == b.den

    def test_to_laurent(self, ctx):
        q = ctx.q(1)
        value = (q ** 2 - q ** -2) / (q - q.inverse())
        assert value.to_laurent() == LaurentPoly.from_dict({1: 1, -1: 1})
        with pytest.raises(ScalarError):
            (q - 1).inverse().to_laurent()

    def test_specialize_at_one(self, ctx):
        q = ctx.q(1)
        quantum_three = (q ** 3 - q ** -3) / (q - q.inverse())
        assert quantum_three.specialize_q1() == 3
        assert specialize_q1(LaurentPoly.from_dict({1: 1, -1: 1})) == 2
        with pytest.raises(PoleAtOne):
            (q - q.inverse()).inverse().specialize_q1()

    def test_bool_means_nonzero(self, ctx):
        q = ctx.q(1)
        assert not (q - q)
        assert q


class TestScalarContext:
    def test_fractional_powers(self):
        ctx = ScalarContext(2)
        half = ctx.q(Fraction(1, 2))
        assert half * half == ctx.q(1)
        assert str(half) == "q^(1/2)"

    def test_power_outside_the_unit_raises(self):
        with pytest.raises(ScalarError):
            ScalarContext(1).q(Fraction(1, 2))

    def test_mixed_units_raise(self):
        with pytest.raises(ScalarError):
            ScalarContext(2).q(Fraction(1, 2)) + ScalarContext(3).q(Fraction(1, 3))

    def test_laurent_round_trip(self):
        ctx = ScalarContext(1)
        poly = LaurentPoly.from_dict({1: 1, -1: 1})
        assert ctx.laurent(poly) == ctx.q(1) + ctx.q(-1)
        assert ctx.q_laurent(2) == LaurentPoly.monomial(2)

    def test_constants(self):
        ctx = ScalarContext(1)
        assert ctx.const(Fraction(1, 2)) + ctx.const(Fraction(1, 2)) == ctx.one
        assert isinstance(ctx.zero, RatFuncQ)


def test_field_operations():
    ctx = ScalarContext(1)
    q = ctx.q(1)
    a = rf_add(q, rf_inv(q))
    assert rf_eq(rf_mul(a, q), q * q + 1)
    assert rf_eq(rf_mul(rf_inv(a), a), ctx.one)
