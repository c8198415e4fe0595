import json

import pytest

from main import SuperQuantApp, binomial_report, main, quotient_report, worked_example_report


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def without_timing(value):
    if isinstance(value, dict):
        return {k: without_timing(v) for k, v in value.items() if k != "elapsed_ms"}
    if isinstance(value, list):
        return [without_timing(v) for v in value]
    return value


def test_cartan_show(capsys):
    code, out = run_cli(capsys, "cartan", "show", "--family", "sl", "--m", "2", "--n", "2")
    document = json.loads(out)
    assert code == 0
    assert document["command"] == "cartan show"
    assert document["passed"]
    assert document["report"]["info"]["datum"]["tau"] == [2]


@pytest.mark.parametrize("argv, label", [
    (("--family", "f4"), "F(4)"),
    (("--family", "g3"), "G(3)"),
    (("--family", "b", "--m", "1", "--n", "2"), "B(1,2)"),
    (("--family", "c", "--n", "3"), "C(3)"),
    (("--family", "d", "--m", "2", "--n", "1"), "D(2,1)"),
])
def test_cartan_show_other_families(capsys, argv, label):
    code, out = run_cli(capsys, "cartan", "show", *argv)
    document = json.loads(out)
    assert code == 0
    assert document["report"]["info"]["datum"]["label"] == label
    assert len(document["report"]["info"]["datum"]["tau"]) == 1


def test_missing_matrix_is_an_input_error(capsys, tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("d = [1, 1]\ntau = [2]\n", encoding="utf-8")
    code, out = run_cli(capsys, "cartan", "show", "--config", str(path))
    assert code == 2
    assert json.loads(out)["error"]["field"] == "matrix"


def test_family_needs_parameters(capsys):
    code, out = run_cli(capsys, "cartan", "show", "--family", "sl", "--m", "2")
    assert code == 2
    assert json.loads(out)["error"]["field"] == "family"


class TestRelationOption:
    def test_bad_relation_reports_position(self, capsys):
        code, out = run_cli(capsys, "check", "serre", "--family", "sl", "--m", "2", "--n", "1",
                            "--no-slices", "--relation", "t1 + t9")
        error = json.loads(out)["error"]
        assert code == 2
        assert error["type"] == "ParseError"
        assert error["position"] == 5

    def test_non_relation_fails(self, capsys):
        code, out = run_cli(capsys, "check-serre", "--family", "sl", "--m", "2", "--n", "1",
                            "--no-slices", "--relation", "t1*t2")
        document = json.loads(out)
        assert code == 1
        failed = [r for r in document["report"]["results"] if not r["passed"]]
        assert [r["label"] for r in failed] == ["kernel:t1*t2"]

    def test_odd_square_passes(self, capsys):
        code, _ = run_cli(capsys, "check", "serre", "--family", "sl", "--m", "2", "--n", "1",
                          "--no-slices", "--relation", "t2*t2")
        assert code == 0


def test_gram_single_weight(capsys):
    code, out = run_cli(capsys, "gram", "--family", "sl", "--m", "3", "--n", "0", "--weight", "2,1", "--verbose")
    result = json.loads(out)["report"]["results"][0]
    assert code == 0
    assert result["label"] == "gram:2,1"
    assert result["detail"]["rank"] == 2
    assert len(result["detail"]["quotient_basis"]) == 2


def test_bad_cap(capsys):
    code, out = run_cli(capsys, "gram", "--family", "sl", "--m", "3", "--n", "0", "--cap", "0")
    assert code == 2
    assert json.loads(out)["error"]["field"] == "cap"


def test_double_with_upsilon(capsys):
    code, out = run_cli(capsys, "double", "--seed", "sl2_borel_jordanian")
    document = json.loads(out)
    assert code == 0
    assert document["report"]["info"]["upsilon_restriction_sign"] == -1
    assert any(r["label"].startswith("upsilon:") for r in document["report"]["results"])


def test_unknown_seed(capsys):
    code, out = run_cli(capsys, "double", "--seed", "nope")
    assert code == 2
    assert json.loads(out)["error"]["field"] == "seed"


def test_hadic_abelian(capsys):
    code, out = run_cli(capsys, "hadic", "--seed", "abelian_even")
    assert code == 0
    assert json.loads(out)["report"]["info"]["J1"] == [["p", "p*", "1/2"]]


def test_oracle_is_deterministic(capsys):
    first = json.loads(run_cli(capsys, "oracle", "cartan", "--m", "2", "--n", "1")[1])
    second = json.loads(run_cli(capsys, "oracle", "cartan", "--m", "2", "--n", "1")[1])
    assert first["passed"]
    assert without_timing(first) == without_timing(second)


def test_oracle_sl22_gram(capsys):
    code, out = run_cli(capsys, "oracle", "cartan", "--m", "2", "--n", "2")
    results = {r["label"]: r["passed"] for r in json.loads(out)["report"]["results"]}
    assert code == 0
    assert results["symmetrized_matches_gram"]


def test_text_output_and_out_file(capsys, tmp_path):
    target = tmp_path / "reports" / "cartan.txt"
    code, out = run_cli(capsys, "cartan", "show", "--family", "b0", "--n", "2", "--text", "--out", str(target))
    assert code == 0
    assert out.rstrip().endswith("PASS")
    assert target.read_text(encoding="utf-8") == out


def test_suite_task_order():
    names = [name for name, _ in SuperQuantApp().suite_tasks(include_slow=False)]
    assert names[0] == "worked-example"
    assert names[-1] == "q-binomial"
    assert not any(name.startswith("generation[") for name in names)
    with_slow = [name for name, _ in SuperQuantApp().suite_tasks(include_slow=True)]
    assert "generation[sl(2|1)]" in with_slow


def test_worked_example():
    report = worked_example_report()
    assert report.passed, [r.witness for r in report.failures()]
    assert [r.label for r in report.results] == ["a1", "a2", "a3", "a4", "a5", "total"]


def test_binomial_report():
    report = binomial_report(5)
    assert report.passed, [r.label for r in report.failures()]


def test_quotient_dimensions_sl21():
    report = quotient_report(2, 1, 3)
    assert report.passed, [r.witness for r in report.failures()]


@pytest.mark.slow
def test_suite_passes(capsys):
    code, out = run_cli(capsys, "suite")
    assert code == 0, [r["label"] for r in json.loads(out)["report"]["results"] if not r["passed"]]
