import json

import numpy as np
import pytest

from wsk.cli import _parse_pairs, main, read_config
from wsk.exceptions import ConfigError
from wsk.experiments import EXPERIMENTS, resolve_params, worker_count

QUICK = ["--J-max", "3", "--K", "5", "--step", "1e-3"]


def run(tmp_path, name, *args):
    out = tmp_path / name
    code = main(["smooth_sweep", *QUICK, "--out", str(out), *args])
    return code, out


def test_every_experiment_has_defaults():
    for name in EXPERIMENTS:
        assert resolve_params(name)


def test_resolve_params_parses_and_rejects():
    p = resolve_params("smooth_sweep", {"K": "5,10", "ibp_boundary": "off", "J_max": "7"})
    assert p["K"] == [5, 10] and p["ibp_boundary"] is False and p["J_max"] == 7
    with pytest.raises(ConfigError) as info:
        resolve_params("smooth_sweep", {"J_max": "many"})
    assert info.value.field == "J_max"
    with pytest.raises(ConfigError) as info:
        resolve_params("smooth_sweep", {"bogus": "1"})
    assert info.value.field == "bogus"
    with pytest.raises(ConfigError):
        resolve_params("smooth_sweep", {"step": "-1"})
    with pytest.raises(ConfigError):
        resolve_params("nope")


def test_parse_pairs_forms():
    assert _parse_pairs(["--J-max", "4", "--K=5,6"]) == {"J_max": "4", "K": "5,6"}
    with pytest.raises(ConfigError):
        _parse_pairs(["--J-max"])
    with pytest.raises(ConfigError):
        _parse_pairs(["stray"])


def test_flat_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# quick run\nexperiment = smooth_sweep\nJ_max = 3  # small\nK = 5\n")
    assert read_config(cfg) == ("smooth_sweep", {"J_max": "3", "K": "5"})
    bad = tmp_path / "bad.cfg"
    bad.write_text("J_max 3\n")
    with pytest.raises(ConfigError):
        read_config(bad)


def test_outputs_and_manifest(tmp_path):
    code, out = run(tmp_path, "a")
    assert code == 0
    manifest = json.loads((out / "run.json").read_text())
    assert manifest["experiment"] == "smooth_sweep"
    assert manifest["params"]["K"] == [5] and manifest["params"]["J_max"] == 3
    assert {"wsk", "numpy", "scikit-learn", "python"} <= set(manifest["versions"])
    lines = (out / "errors.csv").read_text().splitlines()
    assert lines[0] == "J,K,alpha,L,R1,R2,R3,rank_flag"
    rows = [line.split(",") for line in lines[1:]]
    assert [int(r[0]) for r in rows] == [1, 2, 3]


def test_manifest_reproduces_run_byte_for_byte(tmp_path):
    _, first = run(tmp_path, "a")
    code = main(["smooth_sweep", "--config", str(first / "run.json"), "--out", str(tmp_path / "b")])
    assert code == 0
    for name in ("errors.csv", "run.json"):
        assert (first / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_thread_count_does_not_change_output(tmp_path, monkeypatch):
    monkeypatch.setenv("WSK_THREADS", "1")
    _, one = run(tmp_path, "one")
    monkeypatch.setenv("WSK_THREADS", "4")
    _, four = run(tmp_path, "four")
    assert (one / "errors.csv").read_bytes() == (four / "errors.csv").read_bytes()


def test_invalid_thread_count_is_a_config_error(tmp_path, monkeypatch):
    monkeypatch.setenv("WSK_THREADS", "zero")
    with pytest.raises(ConfigError):
        worker_count()
    code, _ = run(tmp_path, "x")
    assert code == 2


def test_bad_value_exits_with_config_code(tmp_path, capsys):
    assert main(["smooth_sweep", "--J-max", "abc", "--out", str(tmp_path)]) == 2
    assert "J_max" in capsys.readouterr().err


def test_check_flag_sets_exit_code(tmp_path):
    assert run(tmp_path, "c", "--check")[0] == 0
    # a coarse step leaves R2 at J = 20 far above the floor target
    argv = ["smooth_sweep", "--J-max", "20", "--K", "20", "--step", "1e-3", "--out", str(tmp_path / "d")]
    assert main(argv + ["--check"]) == 1
    manifest = json.loads((tmp_path / "d" / "run.json").read_text())
    assert not all(c["passed"] for c in manifest["checks"])
    assert main(argv) == 0


def test_ibp_boundary_off_changes_results(tmp_path):
    _, on = run(tmp_path, "on")
    _, off = run(tmp_path, "off", "--ibp-boundary", "off")
    a = np.loadtxt(on / "errors.csv", delimiter=",", skiprows=1, usecols=3)
    b = np.loadtxt(off / "errors.csv", delimiter=",", skiprows=1, usecols=3)
    assert not np.allclose(a, b)


def test_show_params(capsys):
    assert main(["pod_exact", "--show-params", "--K", "20"]) == 0
    assert json.loads(capsys.readouterr().out)["K"] == 20
