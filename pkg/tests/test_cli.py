import json

import pytest

from stepnls.cli import main, resolve_threads
from stepnls.config import ConfigError, load_config, parse_config

PURE = {"datum": {"kind": "pure_step"}, "sweep": {"xi": [-4.0, 3.0, 10.0], "t": [20.0, 40.0]}}


def run(tmp_path, capsys, command, cfg=None, *extra):
    argv = [command, "--out", str(tmp_path / "out")]
    if cfg is not None:
        path = tmp_path / "cfg.json"
        path.write_text(json.dumps(cfg) if isinstance(cfg, dict) else cfg)
        argv += ["--config", str(path)]
    code = main(argv + list(extra))
    lines = capsys.readouterr().out.strip().splitlines()
    return code, json.loads(lines[-1])


def test_defaults():
    cfg = load_config(None)
    assert cfg.params.alpha == 1.0 and cfg.params.beta == 0.6
    assert cfg.datum.kind == "tanh_step"


@pytest.mark.parametrize("doc", [
    {"extra": {}},
    {"params": {"alpha": -1}},
    {"params": {"gamma": 1}},
    {"params": {"delta": 2.0}},
    {"datum": {"kind": "gaussian"}},
    {"datum": {"kind": "file"}},
    {"evolution": {"record_times": [40.0, 20.0]}},
    {"evolution": {"record_times": [50.0]}},
    {"grid": {"dk": "0.1"}},
    {"sweep": {"xi": []}},
    [1, 2],
])
def test_config_rejections(doc):
    with pytest.raises(ConfigError):
        parse_config(doc)


def test_scatter_pure_step(tmp_path, capsys):
    code, summary = run(tmp_path, capsys, "scatter", PURE)
    assert code == 0 and summary["violations"] == 0
    diag = json.loads((tmp_path / "out" / "scattering.json").read_text())
    assert diag["closed_form_max_deviation"] < 1e-8
    header = (tmp_path / "out" / "scattering.csv").read_text().splitlines()[0]
    assert header == "k,re_a,im_a,re_b,im_b,re_r,im_r,abs_r"


def test_scatter_is_deterministic(tmp_path, capsys):
    run(tmp_path, capsys, "scatter", PURE)
    first = (tmp_path / "out" / "scattering.csv").read_bytes()
    run(tmp_path, capsys, "scatter", PURE)
    assert (tmp_path / "out" / "scattering.csv").read_bytes() == first


def test_malformed_config_writes_nothing(tmp_path, capsys):
    code, summary = run(tmp_path, capsys, "scatter", "{not json")
    assert code == 1 and "error" in summary
    assert not (tmp_path / "out").exists()


def test_missing_config_file(tmp_path, capsys):
    code = main(["scatter", "--config", str(tmp_path / "nope.json"), "--out", str(tmp_path / "out")])
    assert code == 1
    assert not (tmp_path / "out").exists()


def test_asymp_pure_step(tmp_path, capsys):
    code, summary = run(tmp_path, capsys, "asymp", PURE)
    assert code == 0
    assert summary["J_odd"] % 2 == 1
    doc = json.loads((tmp_path / "out" / "asymptotics.json").read_text())
    c = doc["halfline"]["c"]
    assert c["re"] == 0 and c["im"] == pytest.approx(2**0.5, abs=1e-14)
    lines = (tmp_path / "out" / "sweep.csv").read_text().splitlines()
    assert lines[0] == "xi,t,re_u,im_u,abs_u,re_sub,im_sub,sector"
    assert len(lines) == 1 + 6


def test_evolve_cfl_violation(tmp_path, capsys):
    cfg = {"evolution": {"L_left": 10, "L_right": 10, "dx": 0.05, "t_end": 1.0,
                         "record_times": [1.0], "dt": 0.01}}
    code, summary = run(tmp_path, capsys, "evolve", cfg)
    assert code == 1 and "stability" in summary["error"]
    assert not (tmp_path / "out").exists()


def test_evolve_small(tmp_path, capsys):
    cfg = {"evolution": {"L_left": 20, "L_right": 20, "dx": 0.05, "t_end": 0.5, "record_times": [0.25, 0.5]}}
    code, summary = run(tmp_path, capsys, "evolve", cfg)
    assert code == 0 and summary["times"] == [0.25, 0.5]
    manifest = json.loads((tmp_path / "out" / "trajectory.json").read_text())
    assert len(manifest["files"]) == 2 and manifest["n_x"] == 801


def test_selftest(tmp_path, capsys):
    code, summary = run(tmp_path, capsys, "selftest")
    assert code == 0
    assert summary["passed"] == summary["registered"] >= 10


def test_threads_from_environment(monkeypatch):
    monkeypatch.setenv("NLS_THREADS", "3")
    assert resolve_threads(None) == 3
    assert resolve_threads(2) == 2
    monkeypatch.setenv("NLS_THREADS", "many")
    assert resolve_threads(None) == 1
    monkeypatch.delenv("NLS_THREADS")
    assert resolve_threads(None) == 1


def test_bad_tolerance_scale(tmp_path, capsys):
    assert main(["scatter", "--tolerance-scale", "0", "--out", str(tmp_path / "o")]) == 1
