from fractions import Fraction

import numpy as np
import pytest

from algebra.errors import AxiomFailure, ConfigError, NotQuasitriangular
from algebra.liebialg import (
    DoubleData,
    LieSBA,
    UpsilonMap,
    change_basis,
    check_bialgebra,
    check_lie,
    cyb,
    double,
    cobracket_of,
    homomorphism_witness,
    is_invariant,
    koszul,
    omega_in_original_basis,
    partial_r,
    r_from_entries,
    restriction_sign,
    structural_cobracket,
    upsilon,
    verify_double,
)
from config import QUASITRIANGULAR_SEEDS, SEED_BIALGEBRAS


def seed(name):
    return LieSBA.from_config(SEED_BIALGEBRAS[name])


def same(a, b):
    return not np.any(np.asarray(a) != np.asarray(b))


def test_koszul_sign():
    assert koszul(1, 1) == -1
    assert koszul(1, 0) == koszul(0, 1) == koszul(0, 0) == 1


@pytest.mark.parametrize("name", sorted(SEED_BIALGEBRAS))
def test_seeds_are_bialgebras(name):
    report = check_bialgebra(seed(name))
    assert report.passed, [r.label for r in report.failures()]


class TestConfig:
    def test_names_default(self):
        g = LieSBA.from_config({"parity": [0, 1]})
        assert g.names == ("e1", "e2")
        assert g.dim == 2

    def test_bad_parity(self):
        with pytest.raises(ConfigError) as info:
            LieSBA.from_config({"parity": [0, 2]})
        assert info.value.field == "parity"

    def test_dim_mismatch(self):
        with pytest.raises(ConfigError) as info:
            LieSBA.from_config({"dim": 3, "parity": [0, 0]})
        assert info.value.field == "dim"

    def test_short_bracket_entry(self):
        with pytest.raises(ConfigError) as info:
            LieSBA.from_structure([0, 0], bracket=[[0, 1, 1]])
        assert info.value.field == "bracket"

    def test_index_out_of_range(self):
        with pytest.raises(ConfigError):
            LieSBA.from_structure([0], cobracket=[[0, 0, 1, 1]])

    def test_round_trip(self):
        g = seed("sl2_borel")
        again = LieSBA.from_config(g.to_config())
        assert same(again.bracket, g.bracket)
        assert same(again.cobracket, g.cobracket)

    def test_r_entries(self):
        r = r_from_entries(2, [[0, 1, 1], [1, 0, "-1/2"]])
        assert r[1, 0] == Fraction(-1, 2)
        with pytest.raises(ConfigError) as info:
            r_from_entries(2, [[0, 2, 1]])
        assert info.value.field == "r"


def test_missing_antisymmetric_partner_fails():
    g = LieSBA.from_structure([0, 0], bracket=[[0, 1, 1, 1]], names=["a", "b"])
    report = check_lie(g)
    assert not report.get("antisymmetry").passed
    assert report.get("antisymmetry").witness == "(a,b)"


def test_bialgebra_failure_is_staged():
    # delta(h) = h (x) e is not co-antisymmetric
    g = LieSBA.from_structure(
        [0, 0], bracket=[[0, 1, 1, 2], [1, 0, 1, -2]],
        cobracket=[[0, 0, 1, 1]], names=["h", "e"],
    )
    report = check_bialgebra(g)
    assert "lie:jacobi" in report
    assert report.get("co_antisymmetry").witness == "h"
    with pytest.raises(AxiomFailure):
        double(g)


class TestDouble:
    def test_basis_and_casimir(self):
        dd = double(seed("sl2_borel"))
        assert dd.g.names == ("h", "e", "h*", "e*")
        assert list(dd.plus_basis) == [0, 1]
        assert list(dd.minus_basis) == [2, 3]
        assert dd.r[0, 2] == 1 and dd.r[1, 3] == 1
        assert dd.omega[2, 0] == 1

    def test_coadjoint_bracket(self):
        dd = double(seed("sl2_borel"))
        # [h, e*] = -2 e*
        assert dd.g.bracket[0, 3, 3] == -2
        assert dd.g.bracket[3, 0, 3] == 2

    def test_odd_casimir_sign(self):
        dd = double(seed("abelian_odd"))
        assert dd.omega[0, 1] == 1
        assert dd.omega[1, 0] == -1

    @pytest.mark.parametrize("name", sorted(SEED_BIALGEBRAS))
    def test_double_axioms(self, name):
        report = verify_double(double(seed(name)))
        assert report.passed, [(r.label, r.witness) for r in report.failures()]
        assert "cyb" in report
        assert "casimir:invariant" in report

    def test_cobracket_is_partial_r(self):
        dd = double(seed("mixed_1_1"))
        assert same(dd.g.cobracket, partial_r(dd.g, dd.r))
        assert same(cobracket_of(dd, 0), dd.g.cobracket[0])
        assert is_invariant(dd.g, dd.omega) is None

    def test_casimir_is_basis_independent(self):
        g = seed("sl2_borel")
        P = [[2, 0], [0, "1/3"]]
        changed = change_basis(g, P)
        assert check_bialgebra(changed).passed
        dd_new = double(changed)
        assert same(omega_in_original_basis(dd_new, P), double(g).omega)

    def test_change_basis_preserves_parity(self):
        with pytest.raises(ValueError):
            change_basis(seed("mixed_1_1"), [[0, 1], [1, 0]])

    def test_structural_cobracket_on_dual_half(self):
        expected = structural_cobracket(seed("sl2_borel"))
        # delta(e*) = -[h, e]^* : -2 h* (x) e* + 2 e* (x) h*
        assert expected[3, 2, 3] == -2
        assert expected[3, 3, 2] == 2
        assert not np.any(expected[2] != 0)
        assert expected[1, 0, 1] == Fraction(1, 2)

    @pytest.mark.parametrize("name", ["sl2_borel", "mixed_1_1"])
    def test_cobracket_of_r_matches_structure(self, name):
        dd = double(seed(name))
        assert same(dd.g.cobracket, structural_cobracket(dd.source))

    def test_tampered_dual_cobracket_is_caught(self):
        dd = double(seed("sl2_borel"))
        cobracket = dd.g.cobracket.copy()
        cobracket[3, 2, 3] += 1
        g = LieSBA(dd.g.parity, dd.g.bracket, cobracket, dd.g.names)
        report = verify_double(DoubleData(g, dd.n_plus, dd.r, dd.omega, dd.source))
        assert report.get("cobracket_plus").passed
        assert not report.get("cobracket_minus").passed
        assert report.get("cobracket_minus").witness == "delta(e*) at h* (x) e*"

    def test_tampered_dual_bracket_is_caught(self):
        dd = double(seed("mixed_1_1"))
        bracket = dd.g.bracket.copy()
        bracket[3, 3, 3] += 1
        g = LieSBA(dd.g.parity, bracket, dd.g.cobracket, dd.g.names)
        report = verify_double(DoubleData(g, dd.n_plus, dd.r, dd.omega, dd.source))
        assert report.get("restriction_plus").passed
        assert report.get("restriction_minus").witness == "[x*,x*] differs from the dual of delta"


class TestUpsilon:
    @pytest.mark.parametrize("name", sorted(QUASITRIANGULAR_SEEDS))
    def test_quasitriangular_seeds(self, name):
        table = QUASITRIANGULAR_SEEDS[name]
        g = LieSBA.from_config(table)
        r = r_from_entries(g.dim, table["r"])
        assert not np.any(cyb(r, g) != 0)
        ups, report = upsilon(g, r)
        assert report.passed, [(x.label, x.witness) for x in report.failures()]
        assert report.info["restriction_sign"] == -1

    def test_jordanian_image(self):
        table = QUASITRIANGULAR_SEEDS["sl2_borel_jordanian"]
        g = LieSBA.from_config(table)
        r = r_from_entries(2, table["r"])
        ups, _ = upsilon(g, r)
        # h* pairs with the first leg of r = h (x) e - e (x) h
        assert same(ups.image(2), [0, -1])
        assert same(ups.image(0), [-1, 0])

    def test_wrong_r_is_rejected(self):
        g = seed("sl2_borel")
        with pytest.raises(NotQuasitriangular):
            upsilon(g, np.full((2, 2), Fraction(0), dtype=object))

    def test_restriction_sign_is_measured(self):
        table = QUASITRIANGULAR_SEEDS["sl2_borel_jordanian"]
        g = LieSBA.from_config(table)
        ups, report = upsilon(g, r_from_entries(2, table["r"]))
        assert restriction_sign(ups, g) == -1
        flipped = UpsilonMap(-ups.matrix, ups.dd)
        assert restriction_sign(flipped, g) == 1
        scaled = UpsilonMap(ups.matrix * 2, ups.dd)
        assert restriction_sign(scaled, g) is None

    def test_homomorphism_needs_the_measured_sign(self):
        table = QUASITRIANGULAR_SEEDS["sl2_borel_jordanian"]
        g = LieSBA.from_config(table)
        ups, report = upsilon(g, r_from_entries(2, table["r"]))
        assert homomorphism_witness(ups, g, -1) is None
        # [h, e] = 2e is not preserved with the opposite sign
        assert homomorphism_witness(ups, g, 1) is not None
        assert report.get("homomorphism").detail["sign"] == -1
