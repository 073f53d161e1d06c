import json

import pytest

import main
from error_utils import SignConventionError


def run(capsys, *argv):
    code = main.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out.splitlines(), captured.err


@pytest.mark.parametrize("argv, first", [
    (["--d", "2", "--k", "3", "--n", "3", "{x2,x1,x3}"], "1*{x1,x2,x3}"),
    (["--d", "3", "--k", "3", "--n", "3", "{x2,x1,x3}"], "-1*{x1,x2,x3}"),
    (["--d", "2", "--k", "4", "--n", "3", "{x1,x2,x3}"], "0"),
    (["--d", "2", "--k", "3", "--n", "2", "[x1,x2]"], "0"),
])
def test_normalize(capsys, argv, first):
    code, out, _ = run(capsys, "normalize", *argv)
    assert code == 0
    assert out[0] == first


def test_normalize_prints_degree(capsys):
    _, out, _ = run(capsys, "normalize", "--d", "2", "--k", "3", "--n", "3", "{x1,x2,x3}")
    assert out[1] == "degree: 3"
    _, out, _ = run(capsys, "normalize", "--d", "2", "--k", "4", "--n", "3", "{x1,x2,x3}")
    assert out[1] == "degree: -"


def test_normalize_json(capsys):
    code, out, _ = run(capsys, "normalize", "--format", "json", "--d", "2", "--k", "3", "--n", "3", "{x2,x1,x3}")
    assert code == 0
    assert json.loads(out[0]) == {
        "ambient": {"d": 2, "k": 3, "n": 3},
        "degree": 3,
        "terms": [{"coeff": 1, "monomial": "{x1,x2,x3}"}],
    }


def test_zero_json_has_null_degree(capsys):
    _, out, _ = run(capsys, "normalize", "--format", "json", "--d", "2", "--k", "4", "--n", "3", "{x1,x2,x3}")
    payload = json.loads(out[0])
    assert payload["degree"] is None
    assert payload["terms"] == []


@pytest.mark.parametrize("argv", [
    ["normalize", "--d", "2", "--k", "3", "--n", "3", "{x1,x2"],
    ["normalize", "--d", "2", "--k", "3", "--n", "3", "{x1,x2,x4}"],
    ["normalize", "--d", "2", "--k", "4", "--n", "6", "{x1,{x2,x3,x4,x5},x6}"],
    ["normalize", "--d", "1", "--k", "3", "--n", "1", "x1"],
    ["normalize", "--d", "2", "--k", "3", "--n", "1", "[" * 2000 + "x1"],
    ["compose", "--d", "2", "--k1", "3", "--n1", "3", "--k2", "3", "--n2", "3", "--at", "4",
     "{x1,x2,x3}", "{x1,x2,x3}"],
])
def test_user_errors_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "오류" in err


def test_bad_arguments_exit_two(capsys):
    assert main.main(["normalize", "--d", "two"]) == 2
    assert main.main(["frobnicate"]) == 2


def test_internal_error_exits_one(capsys, monkeypatch):
    def broken(*args, **kwargs):
        raise SignConventionError("부호 불일치")

    monkeypatch.setattr(main, "normalize", broken)
    code, _, _ = run(capsys, "normalize", "--d", "2", "--k", "3", "--n", "1", "x1")
    assert code == 1


def test_parse_command(capsys):
    code, out, _ = run(capsys, "parse", "--d", "2", "--k", "3", "--n", "5", "x2·[{x1,x3,x4},x5]")
    assert code == 0
    assert out == ["x2*[{x1,x3,x4},x5]"]


def test_degree_command(capsys):
    code, out, _ = run(capsys, "degree", "--d", "2", "--k", "4", "--n", "3", "{x1,x2,x3}")
    assert code == 0
    assert out == ["expression: 3", "normal form: -"]


def test_compose_echoes_graft(capsys):
    code, out, _ = run(capsys, "compose", "--d", "2", "--k1", "3", "--n1", "5", "--k2", "3", "--n2", "3",
                       "--at", "5", "[{x1,x2,x3},x4]*x5", "{x1,x2,x3}")
    assert code == 0
    assert out[0] == "graft: [{x1,x2,x3},x4]*{x5,x6,x7}"
    assert out[1] == "classes: II ∘_5 II"
    assert out[2] == "0"


def test_compose_nonzero_json(capsys):
    code, out, _ = run(capsys, "compose", "--format", "json", "--d", "2", "--k1", "3", "--n1", "5",
                       "--k2", "3", "--n2", "3", "--at", "3", "[{x1,x2,x3},x4]*x5", "{x1,x2,x3}")
    assert code == 0
    payload = json.loads(out[0])
    assert payload["graft"] == "[{x1,x2,{x3,x4,x5}},x6]*x7"
    assert payload["ambient"] == {"d": 2, "k": 4, "n": 7}
    assert payload["terms"]


def test_basis_listing(capsys):
    code, out, _ = run(capsys, "basis", "--d", "2", "--k", "3", "--n", "4", "--degree", "4", "--oracle")
    assert code == 0
    assert out[-2:] == ["count: 3", "oracle: 3"]


def test_basis_table_json(capsys):
    code, out, _ = run(capsys, "basis", "--format", "json", "--d", "2", "--k", "3", "--n", "4")
    assert code == 0
    degrees = json.loads(out[0])["degrees"]
    assert {"degree": 3, "count": 4} in degrees


def test_signs(capsys):
    code, out, _ = run(capsys, "signs", "--format", "json", "--k1", "3", "--k2", "3", "--d", "2")
    assert code == 0
    payload = json.loads(out[0])
    assert payload["product"] == -1
    assert payload["consistent"] is True


def test_verify_signs(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "signs", "--d", "2,3", "--k", "3,4", "--quiet", "--threads", "2")
    assert code == 0
    assert out[-1].startswith("signs:")
    assert "실패 0" in out[-1]


def test_verify_json_is_deterministic(capsys):
    argv = ["verify", "--format", "json", "--suite", "confluence", "--d", "2", "--k", "3",
            "--random", "20", "--seed", "7", "--quiet"]
    code, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert code == 0
    assert first == second
    payload = json.loads(first[0])
    assert payload["passed"] is True
    assert payload["seed"] == 7
    assert len(payload["cases"]) == 20


def test_verify_failure_exits_one(capsys, monkeypatch):
    import pandas as pd

    def failing(*args, **kwargs):
        return pd.DataFrame([{"case_id": "x", "suite": "signs", "description": "", "passed": False,
                              "detail": "강제 실패"}])

    monkeypatch.setattr(main, "run_suite", failing)
    code, out, _ = run(capsys, "verify", "--suite", "signs", "--quiet")
    assert code == 1
    assert "강제 실패" in "\n".join(out)


def test_verify_label_range(capsys):
    code, out, _ = run(capsys, "verify", "--format", "json", "--suite", "relations", "--d", "2", "--k", "3",
                       "--n", "4", "--quiet")
    assert code == 0
    ids = [case["case_id"] for case in json.loads(out[0])["cases"]]
    assert any("/jacobi" in case_id for case_id in ids)
    assert not any("/symmetry/" in case_id for case_id in ids)


@pytest.mark.parametrize("argv", [
    ["verify", "--suite", "signs", "--random", "-1", "--quiet"],
    ["verify", "--suite", "relations", "--n", "0", "--quiet"],
])
def test_verify_bad_settings_exit_two(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert "오류" in err
