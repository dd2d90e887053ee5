import json

import pytest

from bellsta.cli import main, parse_values


def _body(text):
    return [line for line in text.splitlines() if not line.startswith("#")]


def test_simulate_default(capsys):
    assert main(["simulate", "--method", "tqd", "--params", "default"]) == 0
    out, err = capsys.readouterr()
    assert out.startswith("# {")
    fid = float(next(line for line in err.splitlines() if line.startswith("fidelity")).split(":")[1])
    assert fid >= 0.999
    assert _body(out)[0].startswith("t,re_psi_uu,im_psi_uu")


def test_sweep_csv_header(tmp_path, capsys):
    out = tmp_path / "grid.csv"
    code = main(["sweep", "--method", "tqd", "--set", "sweep.omega0=0.1,0.2",
                 "--set", "sweep.alpha=0.5:1:2", "--steps", "1000", "--out", str(out)])
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[1] == "omega0,alpha,population"
    assert len(lines) == 2 + 4
    assert "written" in capsys.readouterr().out


def test_missing_parameter_file(capsys):
    assert main(["simulate", "--params", "missing.json"]) == 2
    assert "missing.json" in capsys.readouterr().err


def test_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"alpha": 1.0, "gamma0": 2.0}))
    assert main(["simulate", "--params", str(cfg)]) == 2
    assert "gamma0" in capsys.readouterr().err
    assert main(["simulate", "--set", "sweep.rate=1"]) == 2


def test_bad_usage():
    assert main(["teleport"]) == 2
    assert main(["simulate", "--method", "all"]) == 2


def test_lri_window_must_contain_crossing(capsys):
    assert main(["simulate", "--method", "lri", "--set", "t_f=2"]) == 2
    assert "t12" in capsys.readouterr().err


def test_numerical_failure_exit_code(capsys):
    # crossing close to the window end drives sin(beta) through zero
    assert main(["simulate", "--method", "lri", "--set", "t_f=3.3", "--steps", "200"]) == 3
    assert "sin(beta)" in capsys.readouterr().err


def test_dump_config_round_trip(tmp_path, capsys):
    assert main(["design-lri", "--set", "t_f=10", "--dump-config"]) == 0
    cfg = capsys.readouterr().out
    path = tmp_path / "cfg.json"
    path.write_text(cfg)
    assert main(["design-lri", "--set", "t_f=10"]) == 0
    direct = capsys.readouterr().out
    assert main(["design-lri", "--params", str(path)]) == 0
    assert capsys.readouterr().out == direct


def test_json_output(capsys):
    assert main(["design-lri", "--format", "json"]) == 0
    out = capsys.readouterr().out
    records = json.loads(out.split("\n", 1)[1])
    assert set(records[0]) == {"t", "gamma", "beta", "omega_lr", "delta_lr"}


@pytest.mark.parametrize("text, expected", [("0:1:3", [0, 0.5, 1]), ("1,2", [1, 2]), ([3], [3])])
def test_parse_values(text, expected):
    assert parse_values(text) == expected
