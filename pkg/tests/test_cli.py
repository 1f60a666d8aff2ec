import csv
import io
import json

import jsonschema
import pytest

from steinw1 import cli
from steinw1.schema import SCHEMAS


def _run(capsys, argv):
    code = cli.main(argv)
    out = capsys.readouterr().out
    return code, out


def test_catalog_listing(capsys):
    code, out = _run(capsys, ["catalog"])
    assert code == 0
    assert "binomial" in out and "erlangc" in out


def test_catalog_json_schema(capsys):
    code, out = _run(capsys, ["catalog", "--json"])
    assert code == 0
    jsonschema.validate(json.loads(out), SCHEMAS["catalog"])


def test_weights_csv(capsys):
    code, out = _run(capsys, ["weights", "--family", "binomial", "-p", "n=4", "-p", "t=0.3"])
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert rows[0] == ["index", "point", "mass", "weight"]
    assert len(rows) == 6
    assert float(rows[-1][3]) == pytest.approx(0.0, abs=1e-10)


def test_weights_json_schema(capsys):
    code, out = _run(capsys, ["weights", "--family", "poisson", "-p", "lam=2",
                              "--format", "json"])
    assert code == 0
    jsonschema.validate(json.loads(out), SCHEMAS["weights"])


def test_bound_json_schema_and_check(capsys):
    code, out = _run(capsys, [
        "bound", "--family", "hypergeometric",
        "-p", "N=100", "-p", "n=20", "-p", "r=30", "--with-oracle", "--check",
    ])
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, SCHEMAS["bound_report"])
    assert doc["oracle_w1"] <= doc["bound"]


def test_bound_moran_numeric_flag(capsys):
    code, out = _run(capsys, ["bound", "--family", "moran",
                              "-p", "a=2", "-p", "b=3", "-p", "n=50"])
    assert code == 0
    assert json.loads(out)["bound"] > 0


def test_build_and_oracle_roundtrip(tmp_path, capsys):
    law_file = tmp_path / "law.json"
    code, out = _run(capsys, [
        "build", "--target", "gamma", "-p", "alpha=2", "-p", "beta=1",
        "--delta", "0.05", "--out", str(law_file),
    ])
    assert code == 0
    doc = json.loads(out)
    assert doc["report"]["bound"] == pytest.approx(0.1, rel=1e-6)
    jsonschema.validate(json.loads(law_file.read_text()), SCHEMAS["law"])
    code, out = _run(capsys, [
        "oracle", "--law", str(law_file), "--target", "gamma",
        "--tparam", "alpha=2", "--tparam", "beta=1",
    ])
    assert code == 0
    assert json.loads(out)["w1"] <= 0.1


def test_build_solved_mesh(capsys):
    code, out = _run(capsys, ["build", "--target", "beta", "-p", "alpha=2",
                              "-p", "beta=2", "--ell", "50"])
    assert code == 0
    doc = json.loads(out)
    assert 0 < doc["delta"] * 50 < 1


def test_sweep_csv(tmp_path, capsys):
    spec = {
        "case": "binomial",
        "fixed": {"t": 0.5},
        "grid": {"n": [16, 64, 256]},
        "with_oracle": True,
        "output": str(tmp_path / "sweep.csv"),
    }
    spec_file = tmp_path / "spec.json"
    spec_file.write_text(json.dumps(spec))
    code, _ = _run(capsys, ["sweep", str(spec_file), "--jobs", "2"])
    assert code == 0
    rows = list(csv.DictReader(io.StringIO((tmp_path / "sweep.csv").read_text())))
    assert [r["param_n"] for r in rows] == ["16", "64", "256"]
    bounds = [float(r["bound"]) for r in rows]
    assert bounds == sorted(bounds, reverse=True)
    for r in rows:
        assert float(r["ratio"]) >= 1.0


def test_cli_deterministic(capsys):
    argv = ["bound", "--family", "polya", "-p", "alpha=2", "-p", "beta=3",
            "-p", "m=1", "-p", "n=40"]
    _, first = _run(capsys, argv)
    _, second = _run(capsys, argv)
    assert first == second


def test_check_command_exit_zero(capsys):
    code, out = _run(capsys, ["check"])
    assert code == 0
    assert "checks passed" in out


def test_unknown_case_is_error(capsys):
    code = cli.main(["bound", "--family", "nosuch"])
    assert code == 2


def test_sweep_accepts_command_key(tmp_path, capsys):
    spec = {
        "command": "geometric",
        "fixed": {"rate": 1.0},
        "grid": {"t": [0.3, 0.5]},
        "output": str(tmp_path / "s.csv"),
    }
    f = tmp_path / "spec.json"
    f.write_text(json.dumps(spec))
    code, _ = _run(capsys, ["sweep", str(f)])
    assert code == 0
    text = (tmp_path / "s.csv").read_text()
    header = text.splitlines()[0]
    assert "param_t" in header and "bound" in header
    assert len(text.splitlines()) == 3


def test_weights_json_moran_range_flag(capsys):
    code, out = _run(capsys, [
        "weights", "--family", "moran", "-p", "a=2", "-p", "b=3", "-p", "n=50",
        "--format", "json",
    ])
    assert code == 0
    doc = json.loads(out)
    assert doc["in_unit_interval"] is True
    assert doc["source"] == "recurrence"
