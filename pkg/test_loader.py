import json

import pytest

from algebra.errors import ConfigError
from data.loader import DatumLoader


@pytest.fixture
def loader():
    return DatumLoader()


SL21_TOML = """
label = "sl21"
matrix = [[2, -1], [-1, 0]]
tau = [2]
d = [1, 1]
"""


def test_missing_file(loader, tmp_path):
    with pytest.raises(ConfigError) as info:
        loader.read_table(str(tmp_path / "absent.toml"))
    assert info.value.field == "config"


def test_toml_datum(loader, tmp_path):
    path = tmp_path / "sl21.toml"
    path.write_text(SL21_TOML, encoding="utf-8")
    datum = loader.load_datum(config_path=str(path))
    assert datum.label == "sl21"
    assert datum.tau == frozenset({1})
    assert datum.provenance.startswith("config:")


def test_nested_cartan_table(loader, tmp_path):
    path = tmp_path / "nested.toml"
    path.write_text("[cartan]\n" + SL21_TOML, encoding="utf-8")
    assert loader.load_datum(config_path=str(path)).s == 2


def test_json_is_read_first_for_json_suffix(loader, tmp_path):
    path = tmp_path / "sl3.json"
    path.write_text(json.dumps({"matrix": [[2, -1], [-1, 2]], "d": [1, 1]}), encoding="utf-8")
    assert loader.read_table(str(path))["d"] == [1, 1]
    assert loader.error_log == []


def test_json_fallback_after_toml(loader, tmp_path):
    path = tmp_path / "sl3.cfg"
    path.write_text(json.dumps({"matrix": [[2, -1], [-1, 2]], "d": [1, 1]}), encoding="utf-8")
    table = loader.read_table(str(path))
    assert table["matrix"] == [[2, -1], [-1, 2]]
    assert loader.error_log and loader.error_log[0].startswith("TOML reader")


def test_unreadable_file(loader, tmp_path):
    path = tmp_path / "junk.toml"
    path.write_text("matrix = [[2, -1\n", encoding="utf-8")
    with pytest.raises(ConfigError) as info:
        loader.read_table(str(path))
    assert info.value.field == "config"
    assert len(loader.error_log) == 2


def test_builtin_family(loader):
    datum = loader.load_datum("d21", {"alpha": "1/2"})
    assert datum.label == "D(2,1;1/2)"
    assert loader.load_datum("d21", {"alpha": "1/2"}) is datum


def test_no_source(loader):
    with pytest.raises(ConfigError) as info:
        loader.load_datum()
    assert info.value.field == "family"


class TestBialgebra:
    def test_seed_with_r(self, loader):
        name, g, r = loader.load_bialgebra(seed="sl2_borel_jordanian")
        assert name == "sl2_borel_jordanian"
        assert g.names == ("h", "e")
        assert r[0, 1] == 1 and r[1, 0] == -1

    def test_seed_without_r(self, loader):
        _, _, r = loader.load_bialgebra(seed="abelian_odd")
        assert r is None

    def test_unknown_seed(self, loader):
        with pytest.raises(ConfigError) as info:
            loader.load_bialgebra(seed="nope")
        assert info.value.field == "seed"
        assert "sl2_borel" in str(info.value)

    def test_nested_bialgebra_file(self, loader, tmp_path):
        path = tmp_path / "odd_line.toml"
        path.write_text('[bialgebra]\nparity = [1]\nnames = ["x"]\n', encoding="utf-8")
        name, g, r = loader.load_bialgebra(input_path=str(path))
        assert name == "odd_line"
        assert g.parity == (1,)
        assert r is None

    def test_no_input(self, loader):
        with pytest.raises(ConfigError) as info:
            loader.load_bialgebra()
        assert info.value.field == "input"
