from fractions import Fraction

import pytest

from algebra.errors import ConfigError
from utils.validators import ConfigValidator, parse_rational_option, parse_weight


def cartan(**overrides):
    table = {"matrix": [[2, -1], [-1, 0]], "tau": [2], "d": [1, 1]}
    table.update(overrides)
    return table


class TestCartanConfig:
    def test_valid(self):
        assert ConfigValidator.check_cartan_config(cartan()) == (True, "", None)

    @pytest.mark.parametrize("overrides, field", [
        ({"matrix": []}, "matrix"),
        ({"matrix": [[2, -1], [-1]]}, "matrix"),
        ({"matrix": [[2, "x"], [-1, 0]]}, "matrix"),
        ({"rank": 3}, "rank"),
        ({"d": [1]}, "d"),
        ({"d": [1, 0]}, "d"),
        ({"tau": [1, 2]}, "tau"),
        ({"tau": [3]}, "tau"),
        ({"alpha": "pi"}, "alpha"),
    ])
    def test_rejections(self, overrides, field):
        ok, message, offending = ConfigValidator.check_cartan_config(cartan(**overrides))
        assert not ok and message
        assert offending == field

    def test_missing_d(self):
        table = cartan()
        del table["d"]
        assert ConfigValidator.check_cartan_config(table)[2] == "d"


class TestBialgebraConfig:
    def test_valid(self):
        table = {"parity": [0, 1], "bracket": [[0, 1, 1, 1], [1, 0, 1, -1]], "r": [[1, 1, "1/2"]]}
        assert ConfigValidator.check_bialgebra_config(table)[0]

    @pytest.mark.parametrize("table, field", [
        ({}, "parity"),
        ({"parity": [0, 3]}, "parity"),
        ({"parity": [0], "dim": 2}, "dim"),
        ({"parity": [0], "cobracket": [[0, 0, 0]]}, "cobracket"),
        ({"parity": [0], "bracket": [[0, 0, 1, 1]]}, "bracket"),
        ({"parity": [0], "bracket": [[0, 0, 0, "x"]]}, "bracket"),
        ({"parity": [0], "r": [[0, 1, 1]]}, "r"),
        ({"parity": [0], "names": ["a", "b"]}, "names"),
    ])
    def test_rejections(self, table, field):
        assert ConfigValidator.check_bialgebra_config(table)[2] == field

    def test_require_raises_with_field(self):
        with pytest.raises(ConfigError) as info:
            ConfigValidator.require(ConfigValidator.check_bialgebra_config({"parity": [2]}))
        assert info.value.field == "parity"


def test_validate_cap():
    assert ConfigValidator.validate_cap(3)[0]
    assert not ConfigValidator.validate_cap(0)[0]
    assert not ConfigValidator.validate_cap(True)[0]


def test_validate_family():
    assert ConfigValidator.validate_family("b0", {"n": 2})[0]
    ok, message = ConfigValidator.validate_family("sl", {"m": 2, "n": None})
    assert not ok and "--n" in message
    assert not ConfigValidator.validate_family("e8", {})[0]


def test_family_params_keep_used_names():
    params = ConfigValidator.family_params("d21", {"m": 2, "n": None, "alpha": "2/3"})
    assert params == {"alpha": Fraction(2, 3)}


def test_parse_weight():
    assert parse_weight("1, 2,1") == (1, 2, 1)
    assert parse_weight("2,0", s=2) == (2, 0)
    for bad in ("", "1,-1", "a,b"):
        with pytest.raises(ConfigError):
            parse_weight(bad)
    with pytest.raises(ConfigError) as info:
        parse_weight("1,1", s=3)
    assert info.value.field == "weight"


def test_parse_rational_option():
    assert parse_rational_option("-3/4", "alpha") == Fraction(-3, 4)
    with pytest.raises(ConfigError) as info:
        parse_rational_option("0.5.1", "alpha")
    assert info.value.field == "alpha"
