from fractions import Fraction

import pytest

from algebra.errors import CapExceeded
from algebra.hadic import (
    UNIT,
    PBWAlgebra,
    TruncH,
    VermaPair,
    VermaVec,
    compute_J,
    format_tensor,
    primitive,
    r_matrix,
    twisted_coproduct,
    verify_quantization,
)
from algebra.liebialg import DoubleData, LieSBA, double
from config import SEED_BIALGEBRAS


def seed_double(name):
    return double(LieSBA.from_config(SEED_BIALGEBRAS[name]))


@pytest.fixture(scope="module")
def borel():
    # basis h, e, h*, e*
    return seed_double("sl2_borel")


class TestPBWAlgebra:
    def test_reordering_adds_bracket(self, borel):
        algebra = PBWAlgebra(borel)
        # e h = h e + [e, h] = h e - 2 e
        assert algebra.normal_form((1, 0)) == {(0, 1): 1, (1,): -2}
        assert algebra.normal_form((0, 1)) == {(0, 1): 1}

    def test_multiply(self, borel):
        algebra = PBWAlgebra(borel)
        e, h = {(1,): Fraction(1)}, {(0,): Fraction(1)}
        # [h, e] = h e - e h = 2 e
        he, eh = algebra.multiply(h, e), algebra.multiply(e, h)
        commutator = {k: he.get(k, 0) - eh.get(k, 0) for k in set(he) | set(eh)}
        assert {k: v for k, v in commutator.items() if v} == {(1,): 2}

    def test_odd_square_halves_bracket(self):
        dd = seed_double("abelian_odd")
        algebra = PBWAlgebra(dd)
        assert not algebra.is_normal((0, 0))
        # [x, x*] and [x, x] vanish in the abelian double
        assert algebra.normal_form((0, 0)) == {}

    def test_cap(self, borel):
        with pytest.raises(CapExceeded):
            PBWAlgebra(borel, cap=1).normal_form((1, 0))

    def test_basis_skips_repeated_odd_letters(self):
        algebra = PBWAlgebra(seed_double("abelian_odd"))
        assert algebra.basis(2) == [(), (0,), (1,), (0, 1)]

    def test_flip_signs(self):
        algebra = PBWAlgebra(seed_double("abelian_odd"))
        assert algebra.flip({((0,), (1,)): Fraction(1)}) == {((1,), (0,)): -1}
        assert algebra.flip(primitive(0)) == primitive(0)


class TestVerma:
    def test_cartan_acts_on_lowering_vector(self, borel):
        pair = VermaPair(borel)
        v = VermaVec("+", {(3,): Fraction(1)})
        # h e* 1+ = e* h 1+ + [h, e*] 1+ = -2 e* 1+
        assert pair.verma_action({(0,): Fraction(1)}, v).terms == {(3,): -2}

    def test_plus_part_kills_generator(self, borel):
        pair = VermaPair(borel)
        image = pair.verma_action({(1,): Fraction(1)}, VermaVec("+", {(): Fraction(1)}))
        assert image.side == "+"
        assert image.terms == {}

    def test_phi_on_generators(self, borel):
        pair = VermaPair(borel)
        assert pair.phi((0,)) == {((), (0,)): 1}
        assert pair.phi((2,)) == {((2,), ()): 1}
        assert pair.phi(()) == UNIT

    @pytest.mark.parametrize("word", [(0,), (3,), (0, 3), (1, 2), (0, 1, 3)])
    def test_phi_inverse_recovers_normal_words(self, borel, word):
        pair = VermaPair(borel)
        assert pair.phi_inverse(pair.phi(word)) == {word: 1}

    def test_phi_inverse_of_zero(self, borel):
        assert VermaPair(borel).phi_inverse({}) == {}

    def test_phi_inverse_cap(self, borel):
        with pytest.raises(CapExceeded):
            VermaPair(borel, cap=1).phi_inverse({((3, 3), ()): Fraction(1)})


class TestTruncH:
    def test_inverse_of_unit(self):
        x = TruncH(dict(UNIT), {((0,), ()): Fraction(3)})
        assert x.inverse_of_unit().c1 == {((0,), ()): -3}
        assert x.inverse_of_unit().c0 == UNIT

    def test_difference_cancels(self):
        x = TruncH({"a": Fraction(1)}, {"b": Fraction(2)})
        diff = x - x
        assert diff.c0 == {} and diff.c1 == {}


def test_twist_of_abelian_double():
    J = compute_J(seed_double("abelian_even"))
    assert J.c0 == UNIT
    assert J.c1 == {((0,), (1,)): Fraction(1, 2)}


def test_twisted_coproduct_of_cartan(borel):
    pair = VermaPair(borel)
    J = compute_J(borel, pair=pair)
    delta, report = twisted_coproduct(0, borel, J, pair)
    assert report.passed, [r.witness for r in report.failures()]
    assert delta.c0 == primitive(0)


def test_cobracket_is_compared_with_the_input_structure():
    dd = seed_double("abelian_even")
    source = LieSBA.from_structure([0], cobracket=[[0, 0, 0, 1]], names=["p"])
    tampered = DoubleData(dd.g, dd.n_plus, dd.r, dd.omega, source)
    pair = VermaPair(tampered)
    J = compute_J(tampered, pair=pair)
    _, report = twisted_coproduct(0, tampered, J, pair)
    assert not report.get("cobracket_matches").passed
    assert report.get("partial_r_matches").passed
    _, report = twisted_coproduct(1, tampered, J, pair)
    assert report.get("cobracket_matches").passed


def test_r_matrix_of_abelian_double():
    dd = seed_double("abelian_even")
    R, report = r_matrix(dd, compute_J(dd))
    assert report.passed, [r.label for r in report.failures()]
    assert R.c1 == {((0,), (1,)): 1}


def test_format_tensor():
    rows = format_tensor({((0,), (1,)): Fraction(1, 2), ((), ()): Fraction(1)}, ["p", "p*"])
    assert rows == [["1", "1", "1"], ["p", "p*", "1/2"]]


@pytest.mark.parametrize("name", [
    "abelian_even",
    "abelian_odd",
    pytest.param("sl2_borel", marks=pytest.mark.slow),
    pytest.param("mixed_1_1", marks=pytest.mark.slow),
])
def test_quantization_at_order_h(name):
    report = verify_quantization(seed_double(name))
    assert report.passed, [(r.label, r.witness) for r in report.failures()]
    assert report.info["J_matches_lemma"]
    assert report.info["R_matches"]
