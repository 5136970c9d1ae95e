import json
import subprocess
import sys

import pytest

from gue_linstat import cli, montecarlo


def run_json(tmp_path, *args, name="out.json"):
    out = tmp_path / name
    code = cli.main([*args, "--out", str(out), "-q"])
    assert code == 0
    return json.loads(out.read_text())


def test_variance_table(tmp_path):
    rep = run_json(tmp_path, "variance-table", "--f", "identity", "--n", "50")
    assert rep["schema"] == "gue-linstat/1"
    assert rep["command"] == "variance-table"
    assert rep["version"]
    assert rep["config"]["f_id"] == "identity" and rep["config"]["n_list"] == [50]
    assert rep["runtime_seconds"] is None
    (row,) = rep["rows"]
    assert row["var_exact"] == pytest.approx(1.0, abs=1e-9)
    assert row["v_limit_quad"] == pytest.approx(1.0, abs=1e-9)
    assert row["provenance"] == "formula"


def test_necessity_demo(tmp_path):
    rep = run_json(tmp_path, "necessity-demo", "--f", "step")
    vals = [r["var_exact"] for r in rep["rows"]]
    assert all(a < b for a, b in zip(vals, vals[1:]))
    assert rep["fitted_constants"]["log_slope"] > 0
    assert rep["fitted_constants"]["strictly_increasing"] is True


def test_bounds_check(tmp_path):
    rep = run_json(tmp_path, "bounds-check")
    assert [r["n"] for r in rep["rows"]] == [10, 20, 40, 80, 160, 320, 400]
    assert rep["fitted_constants"]["bulk_sup_top_octave_spread"] <= 0.10
    assert rep["fitted_constants"]["envelope_C"] > 0


def test_correlation_and_semicircle(tmp_path):
    rep = run_json(tmp_path, "correlation-check", "--n", "5,20")
    for row in rep["rows"]:
        assert row["trace_rel_error"] < 1e-6
        assert row["reproducing_residual"] < 1e-6
        assert row["cd_vs_direct"] < 1e-9
    rep = run_json(tmp_path, "semicircle-check", "--n", "20,80", name="s.json")
    assert all(r["functional_2"] == pytest.approx(1.0, abs=1e-10) for r in rep["rows"])


def test_clt_run_writes_progress_to_stderr(capsys):
    code = cli.main(["clt-run", "--f", "identity", "--n", "10", "--samples", "60", "--seed", "4"])
    assert code == 0
    captured = capsys.readouterr()
    rep = json.loads(captured.out)
    assert rep["rows"][0]["provenance"] == "monte_carlo"
    assert rep["rows"][0]["ks_pvalue"] is not None


def test_every_row_has_error_field(tmp_path):
    for i, cmd in enumerate(cli.COMMANDS):
        extra = ["--samples", "20", "--n", "8"] if cmd == "clt-run" else ["--n", "8"]
        rep = run_json(tmp_path, cmd, *extra, name=f"{i}.json")
        for row in rep["rows"]:
            assert isinstance(row["error"], float) or row["error"] == "exact"


def test_csv_output(tmp_path):
    out = tmp_path / "t.csv"
    assert cli.main(["variance-table", "--n", "5,10", "--format", "csv", "--out", str(out), "-q"]) == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("command,n,var_exact")
    assert len(lines) == 3


def test_config_errors_exit_2(tmp_path, capsys):
    assert cli.main(["variance-table", "--f", "no_such_fn"]) == 2
    assert cli.main(["variance-table", "--delta", "1.5"]) == 2
    assert cli.main(["variance-table", "--n", "0"]) == 2
    assert cli.main(["clt-run", "--samples", "0"]) == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["variance-table", "--n", "a,b"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 2


def test_numerical_failure_exit_3(monkeypatch):
    monkeypatch.setattr(montecarlo, "MAX_QL_SWEEPS", 0)
    assert cli.main(["clt-run", "--f", "identity", "--n", "12", "--samples", "5", "-q"]) == 3


def test_timing_flag(tmp_path):
    rep = run_json(tmp_path, "variance-table", "--n", "5", "--timing")
    assert isinstance(rep["runtime_seconds"], float)


def test_repeat_runs_identical(tmp_path):
    args = ["clt-run", "--f", "bump", "--n", "16", "--samples", "40", "--seed", "11"]
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert cli.main([*args, "--workers", "1", "--out", str(a), "-q"]) == 0
    assert cli.main([*args, "--workers", "3", "--out", str(b), "-q"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "gue_linstat", "variance-table", "--n", "5", "-q"],
                         capture_output=True, text=True)
    assert res.returncode == 0
    assert json.loads(res.stdout)["rows"][0]["n"] == 5
