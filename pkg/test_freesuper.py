import pytest

from algebra.cartan import builtin
from algebra.errors import NonHomogeneous, ParseError
from algebra.freesuper import (
    FreeElem,
    TensorElem,
    format_element,
    format_word,
    free_algebra,
    parse_element,
    weight_pairing,
    words,
    weights_up_to,
)


@pytest.fixture
def sl3():
    return builtin("sl", m=3, n=0)


@pytest.fixture
def sl21():
    return builtin("sl", m=2, n=1)


def test_words_are_lexicographic():
    assert words((2, 1)) == [(0, 0, 1), (0, 1, 0), (1, 0, 0)]
    assert words((0, 0)) == [()]
    assert len(words((1, 1, 1))) == 6


def test_weights_up_to_orders_by_degree():
    assert weights_up_to(2, 2) == [(1, 0), (0, 1), (2, 0), (1, 1), (0, 2)]
    assert weights_up_to(2, 1, include_zero=True) == [(0, 0), (1, 0), (0, 1)]


def test_weight_pairing(sl3):
    assert weight_pairing((1, 0), (0, 1), sl3) == -1
    assert weight_pairing((1, 1), (1, 1), sl3) == 2


class TestFreeElem:
    def test_products_concatenate(self):
        t1, t2 = FreeElem.generator(0), FreeElem.generator(1)
        assert (t1 * t2).words() == [(0, 1)]
        assert t1 ** 3 == FreeElem.word((0, 0, 0))
        assert t1 ** 0 == FreeElem.one()

    def test_cancellation_drops_terms(self):
        t1 = FreeElem.generator(0)
        assert not (t1 - t1)
        assert len(t1 + t1) == 1
        assert (t1 + t1).coefficient((0,)) == 2

    def test_scalar_coefficients(self, sl3):
        q = sl3.context.q(1)
        elem = FreeElem.word((0, 1), q) + 2
        assert elem.coefficient((0, 1)) == q
        assert elem.coefficient(()) == 2
        assert elem.as_scalar() is None
        assert FreeElem.scalar(q).as_scalar() == q

    def test_negative_power_raises(self):
        with pytest.raises(ValueError):
            FreeElem.generator(0) ** -1

    def test_format(self):
        assert format_word(()) == "1"
        assert format_word((0, 0, 1)) == "t1^2*t2"
        assert format_element(FreeElem.generator(0) - FreeElem.generator(1)) == "t1 - t2"
        assert format_element(-FreeElem.generator(0)) == "-t1"
        assert format_element(FreeElem()) == "0"


class TestFreeSuperAlgebra:
    def test_weight_and_parity(self, sl21):
        algebra = free_algebra(sl21)
        assert algebra.weight((0, 1, 1)) == (1, 2)
        assert algebra.parity((1,)) == 1
        assert algebra.parity((1, 1)) == 0

    def test_mixed_weights_raise(self, sl3):
        algebra = free_algebra(sl3)
        with pytest.raises(NonHomogeneous):
            algebra.element_weight(FreeElem.generator(0) + FreeElem.generator(1))
        assert algebra.element_weight(FreeElem()) is None

    def test_crossing_factor(self, sl3, sl21):
        q = sl3.context.q(1)
        assert free_algebra(sl3).crossing((0,), (1,)) == q.inverse()
        # odd letter past odd letter: sign and q^{a_22 d_2} = 1
        assert free_algebra(sl21).crossing((1,), (1,)) == -1

    def test_coproduct_of_two_letters(self, sl3):
        algebra = free_algebra(sl3)
        q = sl3.context.q(1)
        r = algebra.coproduct_word((0, 1))
        assert r.coefficient((0, 1), ()) == 1
        assert r.coefficient((0,), (1,)) == 1
        assert r.coefficient((1,), (0,)) == q.inverse()
        assert r.coefficient((), (0, 1)) == 1
        assert len(r) == 4

    def test_coproduct_is_coassociative(self, sl21):
        algebra = free_algebra(sl21)
        for word in words((1, 2)) + words((2, 1)):
            r = algebra.coproduct_word(word)
            left = algebra.apply_r_to_leg(r, 0)
            right = algebra.apply_r_to_leg(r, 1)
            assert left == right, format_word(word)

    def test_r_is_multiplicative(self, sl3):
        algebra = free_algebra(sl3)
        x, y = (0, 1), (1,)
        product = algebra.twisted_mul(algebra.coproduct_word(x), algebra.coproduct_word(y))
        assert product == algebra.coproduct_word(x + y)

    def test_super_bracket_of_odd_generator(self, sl21):
        algebra = free_algebra(sl21)
        t2 = FreeElem.generator(1)
        assert algebra.super_bracket(t2, t2) == FreeElem.word((1, 1), 2)

    def test_tensor_legs_must_match(self, sl3):
        with pytest.raises(ValueError):
            free_algebra(sl3).twisted_mul(TensorElem.unit(2), TensorElem.unit(3))


class TestParseElement:
    def test_serre_style_expression(self, sl3):
        q = sl3.context.q(1)
        elem = parse_element("t1*t1*t2 - (q+q^-1)*t1*t2*t1 + t2*t1^2", sl3)
        assert elem.coefficient((0, 0, 1)) == 1
        assert elem.coefficient((0, 1, 0)) == -(q + q.inverse())
        assert elem.coefficient((1, 0, 0)) == 1

    def test_fractional_power_of_q(self):
        datum = builtin("b0", n=2)
        elem = parse_element("q^(1/2)*t2", datum)
        assert elem.coefficient((1,)) == datum.context.q("1/2")

    def test_division_by_scalar(self, sl3):
        assert parse_element("t1/2 + t1/2", sl3) == FreeElem.generator(0)

    @pytest.mark.parametrize("text, position", [
        ("t1 + t4", 5),
        ("t1 * $", 5),
        ("t1 / t2", 3),
        ("(t1 + t2", 8),
        ("", 0),
    ])
    def test_errors_carry_position(self, sl3, text, position):
        with pytest.raises(ParseError) as info:
            parse_element(text, sl3)
        assert info.value.position == position

    def test_fractional_power_outside_unit(self, sl3):
        with pytest.raises(ParseError):
            parse_element("q^(1/2)*t1", sl3)
