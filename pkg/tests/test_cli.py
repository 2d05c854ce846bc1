import json
import math
import subprocess
import sys

import pytest

from jumpcast.cli import main
from jumpcast.config import parse_config_text, RunConfig
from jumpcast.errors import ParameterError


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_derive_no_jumps(capsys):
    code, out, _ = run(capsys, "derive", "--model.alpha", "0.05", "--model.sigma", "0.2", "--model.lambda", "0")
    data = json.loads(out)
    assert code == 0
    assert data["beta"] == 0.05 and data["mu"] == 0.2
    assert data["gamma"] == pytest.approx(4.0)
    assert data["relation"] == "TrivialBetter"  # T = 6 < 16


def test_derive_beta_zero(capsys):
    code, out, _ = run(capsys, "derive", "--model.alpha", "0.1", "--model.lambda", "2",
                       "--model.nu", "-0.05", "--model.tau2", "0.01")
    data = json.loads(out)
    assert code == 0
    assert data["gamma"] is None
    assert "coincide" in data["message"]


def test_derive_tie(capsys, tmp_path):
    cfg = tmp_path / "tie.cfg"
    cfg.write_text(f"model.alpha = 0.1\nmodel.sigma = {math.sqrt(0.06)!r}\nmodel.lambda = 0\n"
                   "horizon.t_obs = 6\nhorizon.s_target = 9\n")
    code, out, _ = run(capsys, "derive", "--config", str(cfg))
    data = json.loads(out)
    assert data["relation"] == "Tie"
    assert data["critical_volatility"] == pytest.approx(2.449, abs=5e-4)


def test_validation_error(capsys):
    code, _, err = run(capsys, "derive", "--model.sigma", "-1")
    assert code == 2 and "sigma" in err


def test_config_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# comment\nmodel.alpha=0.3\nn = 2000\njumps = two_point\n")
    from jumpcast import config

    rc = config.load(str(cfg), {"model.alpha": "0.4", "n": None})
    assert rc.model.alpha == 0.4 and rc.n == 2000
    assert rc.jumps.value == "two_point"
    assert rc.model.sigma == 0.2


@pytest.mark.parametrize("text", ["model.beta = 1", "garbage line", "n = abc"])
def test_bad_config(text):
    with pytest.raises(ParameterError):
        RunConfig.from_values(parse_config_text(text))


def test_bad_config_exit_code(capsys, tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("model.unknown = 3\n")
    assert run(capsys, "derive", "--config", str(cfg))[0] == 2


def test_verify_default_passes(capsys, tmp_path):
    code, out, _ = run(capsys, "verify", "--out", str(tmp_path))
    assert code == 0
    data = json.loads(out)
    assert [r["kind"] for r in data] == ["best_measurable", "best_linear", "blue", "trivial"]
    assert all(r["pass"] for r in data) and data[0]["n"] == 100_000
    assert (tmp_path / "verify.csv").read_text().startswith("kind,theory,empirical,stderr,z,pass\n")


def test_verify_insufficient_sample(capsys, tmp_path):
    code, _, err = run(capsys, "verify", "--n", "10", "--out", str(tmp_path))
    assert code == 3 and "insufficient sample" in err


def test_verify_corrupted_theory_fails(capsys, tmp_path):
    assert run(capsys, "verify", "--corrupt-theory", "--out", str(tmp_path))[0] == 1


def test_verify_independent_of_workers(capsys, tmp_path):
    outputs = []
    for w in ("1", "4", "16"):
        d = tmp_path / w
        code, out, _ = run(capsys, "verify", "--workers", w, "--n", "40000", "--out", str(d), "--format", "csv")
        assert code == 0
        outputs.append((out, (d / "verify.json").read_bytes(), (d / "verify.csv").read_bytes()))
    assert outputs[0] == outputs[1] == outputs[2]


@pytest.mark.parametrize("figure, last_gamma", [("1", 5.0), ("2", 20.0)])
def test_sweep_figures(capsys, tmp_path, figure, last_gamma):
    code, out, _ = run(capsys, "sweep", "--figure", figure, "--out", str(tmp_path))
    assert code == 0
    csv_path = tmp_path / "sweep_T6_S9.csv"
    lines = csv_path.read_text().splitlines()
    assert lines[0] == "gamma,best_measurable,best_linear,blue,trivial"
    assert len(lines) == 101
    assert float(lines[-1].split(",")[0]) == last_gamma
    assert (tmp_path / "sweep_T6_S9.svg").read_bytes().startswith(b"<?xml")


def test_sweep_custom_range_and_json(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", "--gamma-min", "0.1", "--gamma-max", "5", "--step", "0.1",
                     "--format", "json", "--out", str(tmp_path))
    assert code == 0
    data = json.loads((tmp_path / "sweep_T6_S9.json").read_text())
    assert len(data["rows"]) == 50 and data["crossing"] == math.sqrt(6)


@pytest.mark.parametrize("step", ["0", "-0.1"])
def test_sweep_bad_step(capsys, tmp_path, step):
    assert run(capsys, "sweep", "--step", step, "--out", str(tmp_path))[0] == 2


def test_forecast(capsys):
    code, out, _ = run(capsys, "forecast", "--p-t", "0.12")
    data = json.loads(out)
    rows = {r["kind"]: r for r in data["table"]}
    assert code == 0
    assert rows["blue"]["forecast"] == pytest.approx(0.18)
    assert rows["trivial"]["forecast"] == 0.12
    assert rows["best_measurable"]["delta"] == 1.0
    assert rows["blue"]["delta"] == pytest.approx(2 / 3)


def test_forecast_beta_zero(capsys):
    code, out, _ = run(capsys, "forecast", "--p-t", "0.37", "--model.alpha", "0.1", "--model.lambda", "2",
                       "--model.nu", "-0.05")
    data = json.loads(out)
    assert data["beta_zero"] is True
    assert {r["forecast"] for r in data["table"]} == {0.37}


def test_mse_csv(capsys):
    code, out, _ = run(capsys, "mse", "--format", "csv")
    lines = out.splitlines()
    assert lines[0] == "kind,mse,delta" and len(lines) == 5
    assert float(lines[1].split(",")[1]) == pytest.approx(0.0801 * 3)


def test_simulate(capsys, tmp_path):
    code, out, _ = run(capsys, "simulate", "--pairs", "--n", "1000", "--format", "svg", "--seed", "7",
                       "--out", str(tmp_path))
    assert code == 0
    path_lines = (tmp_path / "path_seed7.csv").read_text().splitlines()
    assert path_lines[0] == "time,return" and path_lines[1] == "0.0,0.0"
    assert float(path_lines[-1].split(",")[0]) == 9.0
    assert len((tmp_path / "pairs_seed7.csv").read_text().splitlines()) == 1001
    assert (tmp_path / "path_seed7.svg").exists()


def test_moments(capsys, tmp_path):
    code, out, _ = run(capsys, "moments", "--jumps", "two_point", "--out", str(tmp_path))
    assert code == 0 and json.loads(out)["pass"] is True


def test_rerun_is_byte_identical(capsys, tmp_path):
    outs = [run(capsys, "mse")[1], run(capsys, "mse")[1]]
    assert outs[0] == outs[1]
    run(capsys, "sweep", "--out", str(tmp_path / "a"))
    run(capsys, "sweep", "--out", str(tmp_path / "b"))
    for name in ("sweep_T6_S9.csv", "sweep_T6_S9.svg"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "jumpcast", "derive"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["beta"] == pytest.approx(0.06)
