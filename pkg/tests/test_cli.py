import csv
import io
import json
import math

import pytest

from qbell import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_eval_coherent(capsys):
    code, out, _ = run(capsys, "eval", "--l", "0", "--alpha", "1", "--r", "0", "--theta", "0")
    assert code == 0
    assert float(rows(out)[0]["H"]) == pytest.approx(4.0, abs=1e-13)


def test_eval_squeezed_vacuum_disturbed(capsys):
    code, out, _ = run(capsys, "eval", "--l", "0", "--n0", "1", "--beta", "1", "--eta", "1",
                       "--theta-opt", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["config"]["command"] == "eval"
    assert doc["rows"][0]["H"] == pytest.approx(21.8284, abs=1e-4)


def test_eval_degenerate_probe(capsys):
    code, _, err = run(capsys, "eval", "--l", "-1", "--alpha", "0", "--r", "0.3")
    assert code == 2
    assert json.loads(err)["error"] == "DegenerateProbe"


def test_usage_errors(capsys):
    assert run(capsys, "eval", "--l", "0")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "eval", "--l", "0", "--alpha", "1", "--n0", "1", "--beta", "0")[0] == 2
    code, _, err = run(capsys, "optimize", "--n-in", "0.2", "--l", "-1")
    assert code == 2 and json.loads(err)["error"] == "NoRoot"
    code, out, _ = run(capsys, "eval", "--l", "2", "--alpha", "1")
    assert code == 2


def test_fig1_small_grid(capsys):
    code, out, _ = run(capsys, "fig1", "--l-values", "0,1", "--beta-points", "3")
    assert code == 0
    table = rows(out)
    assert list(table[0]) == ["l", "beta", "theta_opt", "n0", "H", "error"]
    l0_end = [r for r in table if r["l"] == "0.0" and r["beta"] == "1.0"][0]
    assert float(l0_end["H"]) == pytest.approx(16.0, abs=1e-9)
    coherent = [r for r in table if r["l"] == "0.0" and r["beta"] == "0.0"][0]
    assert float(coherent["H"]) == pytest.approx(4.0, abs=1e-9)


def test_fig2_small_grid_json(capsys):
    code, out, _ = run(capsys, "fig2", "--n-in-values", "0.2", "--l-values=-1,0",
                       "--format", "json")
    assert code == 0
    r_bad, r_ok = json.loads(out)["rows"]
    assert r_bad["H"] is None and r_bad["error"].startswith("NoRoot")
    assert r_ok["beta_opt"] == pytest.approx(1.0, abs=1e-6) and r_ok["E"] == 0.0


def test_fig5_order_check(capsys):
    code, out, err = run(capsys, "fig5", "--eta-values", "0.5,1", "--n-out-values", "3",
                         "--check-order", "descending")
    assert code == 0
    code, out2, err = run(capsys, "fig5", "--eta-values", "0.5,1", "--n-out-values", "3")
    assert code == 1 and "order violation" in err
    assert out == out2


def test_fig5_l0_matches_single_mode(capsys):
    code, out, _ = run(capsys, "fig5", "--l", "0", "--eta-values", "0", "--n-out-values", "1",
                       "--check-order", "none")
    assert code == 0
    assert float(rows(out)[0]["H"]) == pytest.approx(16.0, abs=1e-9)


def test_oracle_verify_exit_codes(capsys):
    code, out, _ = run(capsys, "oracle-verify", "--check", "kappa-only")
    assert code == 0
    assert [r["check"] for r in rows(out)] == ["kappa"]
    code, out, err = run(capsys, "oracle-verify", "--check", "gamma", "--tol", "1e-18")
    assert code == 1 and "FAIL" in err
    assert run(capsys, "oracle-verify", "--check", "nope")[0] == 2


def test_out_file_and_float_format(tmp_path, capsys):
    path = tmp_path / "eval.csv"
    code, out, _ = run(capsys, "eval", "--l", "0.5", "--alpha", "0.3", "--r", "0.1",
                       "--out", str(path))
    assert code == 0 and out == ""
    for value in rows(path.read_text())[0].values():
        assert float(value) == float(repr(float(value)))


def test_render_nan_as_null():
    text = cli.render([{"x": math.nan, "y": 1.5}], {"k": math.inf}, "json")
    doc = json.loads(text)
    assert doc == {"config": {"k": None}, "rows": [{"x": None, "y": 1.5}]}
