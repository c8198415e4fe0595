from fractions import Fraction

import pytest

from algebra.cartan import CartanDatum, TypeTag, builtin, formula_block_matches, q_binomial, q_integer, validate
from algebra.errors import InvalidDatum, UnsupportedFamily
from algebra.scalars import LaurentPoly

T = LaurentPoly.monomial(1)


def matrix(datum):
    return [[int(x) for x in row] for row in datum.a]


class TestBuiltins:
    def test_sl_2_2(self):
        datum = builtin("sl", m=2, n=2)
        assert matrix(datum) == [[2, -1, 0], [-1, 0, 1], [0, -1, 2]]
        assert datum.tau == frozenset({1})
        assert datum.d == (1, 1, -1)
        assert datum.type_tag == TypeTag.A
        assert datum.unit_L == 1

    def test_sl_without_odd_root(self):
        datum = builtin("sl", m=3, n=0)
        assert matrix(datum) == [[2, -1], [-1, 2]]
        assert datum.odd_index is None

    def test_b0_has_half_symmetrizer(self):
        datum = builtin("b0", n=2)
        assert matrix(datum) == [[2, -1], [-2, 2]]
        assert datum.d == (1, Fraction(1, 2))
        assert datum.tau == frozenset({1})
        assert datum.unit_L == 2

    def test_d21(self):
        datum = builtin("d21", alpha=Fraction(1, 2))
        assert datum.a[0] == (0, 1, Fraction(1, 2))
        assert datum.d == (1, -1, Fraction(-1, 2))
        assert datum.unit_L == 2

    @pytest.mark.parametrize("alpha", [0, -1])
    def test_d21_degenerate_alpha(self, alpha):
        with pytest.raises(InvalidDatum):
            builtin("d21", alpha=alpha)

    def test_unknown_family(self):
        with pytest.raises(UnsupportedFamily):
            builtin("e8")

    def test_out_of_range_parameters(self):
        with pytest.raises(InvalidDatum):
            builtin("sl", m=1, n=0)
        with pytest.raises(InvalidDatum):
            builtin("sl", m=2)


class TestOrthosymplecticAndExceptional:
    def test_b_1_1(self):
        datum = builtin("b", m=1, n=1)
        assert matrix(datum) == [[0, 1], [-2, 2]]
        assert datum.d == (1, Fraction(-1, 2))
        assert datum.tau == frozenset({0})
        assert datum.unit_L == 2

    def test_b_1_2(self):
        datum = builtin("b", m=1, n=2)
        assert matrix(datum) == [[2, -1, 0], [-1, 0, 1], [0, -2, 2]]
        assert datum.d == (1, 1, Fraction(-1, 2))
        assert datum.tau == frozenset({1})
        # the odd root sits between delta_1 - delta_2 and the short root eps_1
        assert formula_block_matches(datum) is None

    def test_c_3(self):
        datum = builtin("c", n=3)
        assert matrix(datum) == [[0, 1, 0], [-1, 2, -2], [0, -1, 2]]
        assert datum.d == (1, -1, -2)
        assert datum.type_tag == TypeTag.C

    def test_d_3_1(self):
        datum = builtin("d", m=3, n=1)
        assert matrix(datum) == [[0, 1, 0, 0], [-1, 2, -1, -1], [0, -1, 2, 0], [0, -1, 0, 2]]
        assert datum.d == (1, -1, -1, -1)

    def test_d_2_1_is_d21_at_one(self):
        datum = builtin("d", m=2, n=1)
        other = builtin("d21", alpha=1)
        assert datum.a == other.a
        assert datum.d == other.d

    def test_f4(self):
        datum = builtin("f4")
        assert matrix(datum) == [[0, 1, 0, 0], [-1, 2, -2, 0], [0, -1, 2, -1], [0, 0, -1, 2]]
        assert datum.d == (1, -1, -2, -2)
        assert datum.label == "F(4)"

    def test_g3(self):
        datum = builtin("g3")
        assert matrix(datum) == [[0, 1, 0], [-1, 2, -3], [0, -1, 2]]
        assert datum.d == (1, -1, -3)

    @pytest.mark.parametrize("family, params", [
        ("b", {"m": 2, "n": 1}),
        ("b", {"m": 2, "n": 3}),
        ("c", {"n": 2}),
        ("c", {"n": 4}),
        ("d", {"m": 2, "n": 2}),
        ("d", {"m": 4, "n": 1}),
        ("f4", {}),
        ("g3", {}),
    ])
    def test_symmetrizable_with_one_isotropic_odd_root(self, family, params):
        datum = builtin(family, **params)
        assert validate(datum).passed, datum.label
        assert len(datum.tau) == 1
        assert datum.a[datum.odd_index][datum.odd_index] == 0

    @pytest.mark.parametrize("family, params", [
        ("b", {"m": 0, "n": 2}),
        ("c", {"n": 1}),
        ("d", {"m": 1, "n": 1}),
    ])
    def test_out_of_range(self, family, params):
        with pytest.raises(InvalidDatum):
            builtin(family, **params)


class TestValidate:
    def test_builtins_pass(self):
        for datum in (builtin("sl", m=2, n=1), builtin("sl", m=3, n=2), builtin("b0", n=3),
                      builtin("d21", alpha=1)):
            assert validate(datum).passed, datum.label

    def test_asymmetric_matrix_fails(self):
        datum = CartanDatum.create([[2, -1], [-2, 2]], [], [1, 1])
        report = validate(datum)
        assert not report.get("symmetrizable").passed
        assert report.get("symmetrizable").witness == "not symmetrizable at (1,2)"

    def test_even_isotropic_root_fails(self):
        datum = CartanDatum.create([[0, 1], [-1, 2]], [], [1, -1])
        assert not validate(datum).get("isotropic_roots_odd").passed

    def test_two_odd_roots_fail(self):
        datum = CartanDatum.create([[0, 1], [1, 0]], [0, 1], [1, 1])
        assert not validate(datum).get("tau").passed

    def test_d1_must_be_one(self):
        datum = CartanDatum.create([[2, -1], [-1, 2]], [], [2, 2])
        assert not validate(datum).get("d1_normalized").passed


class TestConfig:
    def test_from_config_uses_one_based_tau(self):
        datum = CartanDatum.from_config({"matrix": [[2, -1], [-1, 0]], "tau": [2], "d": [1, 1]})
        assert datum.tau == frozenset({1})
        assert datum == CartanDatum.create([[2, -1], [-1, 0]], [1], [1, 1])

    def test_from_config_rejects_invalid(self):
        with pytest.raises(InvalidDatum):
            CartanDatum.from_config({"matrix": [[2, -1], [-3, 2]], "d": [1, 1]})

    def test_to_config_round_trip(self):
        datum = builtin("b0", n=2)
        config = datum.to_config()
        assert config["tau"] == [2]
        assert config["d"] == ["1", "1/2"]
        rebuilt = CartanDatum.from_config(config)
        assert rebuilt.a == datum.a and rebuilt.tau == datum.tau and rebuilt.d == datum.d


class TestQBinomial:
    def test_four_choose_two(self):
        assert q_binomial(4, 2, T) == LaurentPoly.from_dict({4: 1, 2: 1, 0: 2, -2: 1, -4: 1})

    def test_edges(self):
        assert q_binomial(5, 0, T) == LaurentPoly.constant(1)
        assert q_binomial(5, 5, T) == LaurentPoly.constant(1)

    def test_q_integer(self):
        assert q_integer(3, T) == LaurentPoly.from_dict({2: 1, 0: 1, -2: 1})

    def test_bottom_out_of_range(self):
        with pytest.raises(ValueError):
            q_binomial(2, 3, T)

    def test_half_integer_variable(self):
        t = LaurentPoly.monomial(1, unit_L=2)
        assert q_binomial(2, 1, t) == LaurentPoly.from_dict({1: 1, -1: 1}, unit_L=2)


def test_formula_block():
    assert formula_block_matches(builtin("sl", m=2, n=2)) is True
    assert formula_block_matches(builtin("sl", m=2, n=1)) is None
