import hashlib
import json

import pytest

from pegolab.cli import parse_keyed_scales, run


def _json(path):
    with open(path) as fh:
        return json.load(fh)


def test_diagnose_exp_scale_small_eps(tmp_path):
    out = tmp_path / "report.json"
    assert run(["diagnose", "--family", "exp-scale", "--x", "0", "--eps", "1e-2", "--out", str(out)]) == 0
    rep = _json(out)
    assert rep["schema"] == "pego-lab/1"
    assert rep["result"]["verdict"] == "compact"
    assert rep["config"]["eps"] == 0.01
    assert rep["config"]["tgrid"] == {"dt": 0.001, "t_max": 40.0}


def test_verify_zero(tmp_path, capsys):
    assert run(["verify", "--family", "zero", "--x", "0"]) == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["result"]["members"] == [{"index": 0, "l1": 0.0, "l2": 0.0, "marginal": False}]


def test_assert_compact_exit_code(tmp_path):
    out = tmp_path / "m.json"
    assert run(["diagnose", "--family", "modulation-ray", "--x", "0", "--assert-compact", "--out", str(out)]) == 2
    assert _json(out)["result"]["verdict"] == "non-compact"


@pytest.mark.parametrize("argv,needle", [
    (["verify", "--family", "nope"], "unknown family"),
    (["sweep", "--family", "zero", "--criterion", "ExpEquivanish", "--scales", "2,1"], "strictly increasing"),
    (["diagnose", "--family", "zero", "--scales", "time:1"], "inconsistent scales"),
    (["verify"], "bad arguments"),
    (["verify", "--family", "zero", "--eps", "0"], "--eps"),
    (["verify", "--family", "zero", "--threads", "0"], "--threads"),
])
def test_configuration_errors_exit_one(argv, needle, capsys):
    assert run(argv) == 1
    assert needle in capsys.readouterr().err


def test_malformed_dsl(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run(["verify", "--dsl", str(p)]) == 1
    assert "malformed DSL" in capsys.readouterr().err
    p.write_text('{"kind": "indicator", "a": 3, "b": 1}')
    assert run(["verify", "--dsl", str(p)]) == 1
    assert "indicator needs" in capsys.readouterr().err


def test_dsl_family(tmp_path):
    p = tmp_path / "fam.json"
    p.write_text(json.dumps({"members": [{"kind": "exponential", "a": 1}, {"kind": "exponential", "a": 2}],
                             "order": 0.5}))
    out = tmp_path / "v.json"
    assert run(["verify", "--dsl", str(p), "--out", str(out)]) == 0
    rep = _json(out)
    assert rep["config"]["order"] == 0.5
    assert len(rep["result"]["members"]) == 2


def test_unwritable_output(tmp_path, capsys):
    assert run(["verify", "--family", "zero", "--out", str(tmp_path / "missing" / "x.json")]) == 1
    assert "cannot write" in capsys.readouterr().err


def _data_rows(path):
    lines = path.read_text().splitlines()
    assert lines[0].startswith("# ")
    return lines[2:]


def test_sweep_csv_rows_match_scales(tmp_path):
    out = tmp_path / "s.csv"
    assert run(["sweep", "--family", "exp-scale", "--criterion", "ExpEquivanish", "--scales", "0.5,1,2,4",
                "--format", "csv", "--out", str(out)]) == 0
    assert len(_data_rows(out)) == 4


def test_transform_csv_rows_match_frequency_nodes(tmp_path):
    out = tmp_path / "t.csv"
    assert run(["transform", "--family", "singleton-exp", "--dt", "0.01", "--t-max", "10",
                "--format", "csv", "--out", str(out)]) == 0
    # n = 1000 time nodes -> 2 * 500 + 1 frequency nodes
    assert len(_data_rows(out)) == 1001


def test_diagnose_csv_rows_match_ladders(tmp_path):
    out = tmp_path / "d.csv"
    assert run(["diagnose", "--family", "singleton-exp", "--scales", "time=1:2,freq=4:8:16,laplace=0.4,shift=0.1:0.05",
                "--format", "csv", "--out", str(out)]) == 0
    assert len(_data_rows(out)) == 2 + 3 + 1 + 2


def _digest(path):
    return hashlib.sha256(path.read_bytes()).hexdigest()


@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_byte_identical_reruns(tmp_path, fmt, monkeypatch):
    a, b = tmp_path / "a", tmp_path / "b"
    argv = ["diagnose", "--family", "random", "--seed", "2", "--size", "5", "--format", fmt]
    assert run(argv + ["--out", str(a)]) == 0
    monkeypatch.setenv("PEGO_LAB_THREADS", "1")
    assert run(argv + ["--out", str(b), "--threads", "1"]) == 0
    assert _digest(a) == _digest(b)


def test_threads_do_not_change_results(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    argv = ["criteria", "--family", "random", "--seed", "3", "--size", "4"]
    assert run(argv + ["--threads", "1", "--out", str(a)]) == 0
    assert run(argv + ["--threads", "4", "--out", str(b)]) == 0
    assert _json(a)["result"] == _json(b)["result"]
    assert _json(b)["config"]["threads"] == 4


def test_env_threads_default(tmp_path, monkeypatch):
    monkeypatch.setenv("PEGO_LAB_THREADS", "3")
    out = tmp_path / "v.json"
    assert run(["verify", "--family", "zero", "--out", str(out)]) == 0
    assert _json(out)["config"]["threads"] == 3
    monkeypatch.setenv("PEGO_LAB_THREADS", "lots")
    assert run(["verify", "--family", "zero"]) == 1


def test_chains_command(tmp_path):
    out = tmp_path / "c.json"
    assert run(["chains", "--family", "indicator-set", "--out", str(out)]) == 0
    rep = _json(out)["result"]
    assert rep["all_hold"] and len(rep["checks"]) == 5


def test_criteria_command_single_scales(tmp_path):
    out = tmp_path / "c.json"
    assert run(["criteria", "--family", "singleton-exp", "--scales", "time=1", "--out", str(out)]) == 0
    reports = {r["criterion"]: r for r in _json(out)["result"]["reports"]}
    assert reports["ExpEquivanish"]["supremum"] == pytest.approx(0.0676676, abs=1e-6)
    assert run(["criteria", "--family", "singleton-exp", "--scales", "time=1:2"]) == 1


def test_parse_keyed_scales():
    assert parse_keyed_scales("time=1:2,freq=8") == {"time": [1.0, 2.0], "freq": [8.0]}
    assert parse_keyed_scales(None) == {}
