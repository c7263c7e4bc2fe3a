import json

import pytest

from grainstiff.cli import (canonical_csv, canonical_json, flatten_numeric,
                            format_float, main)


def test_format_float_is_stable():
    assert format_float(1.0) == "1"
    assert format_float(0.25) == "0.25"
    assert format_float(-0.0) == "0"
    assert float(format_float(0.1)) == 0.1
    assert float(format_float(5 * 3.14159 / 32)) == 5 * 3.14159 / 32
    with pytest.raises(ValueError):
        format_float(float("nan"))


def test_canonical_json_round_trips():
    payload = {"b": 1, "a": [1.5, {"x": True, "y": None}], "c": "s"}
    text = canonical_json(payload)
    assert json.loads(text) == payload
    # key order is preserved, not sorted
    assert text.index('"b"') < text.index('"a"')


def test_flatten_numeric_projection():
    payload = {
        "meta": {"dim": 2, "inputs": {"kbar_eta": 1.0}},
        "C": {"C_1111": 3.0},
        "derived": {"mu": 1.0, "d_groups": {"d1": 5.0}},
        "warnings": ["text is skipped"],
        "flag": True,
    }
    rows = flatten_numeric(payload)
    assert ("meta.dim", 2) in rows
    assert ("C_1111", 3.0) in rows
    assert ("derived.d_groups.d1", 5.0) in rows
    assert ("flag", 1) in rows
    assert all(not name.startswith("warnings") for name, _ in rows)
    text = canonical_csv(payload)
    assert text.splitlines()[0] == "name,value"


def test_identify_writes_deterministic_output(tmp_path, capsys):
    out1 = tmp_path / "a.json"
    out2 = tmp_path / "b.json"
    argv = ["identify", "--dim", "2", "--keta", "8", "--ktau", "0",
            "--L", "1"]
    assert main(argv + ["--out", str(out1)]) == 0
    assert main(argv + ["--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    payload = json.loads(out1.read_text())
    assert payload["C"]["C_1111"] == pytest.approx(3.0, rel=1e-12)
    assert payload["meta"]["mode"] == "corrected"


def test_identify_stdout_json(capsys):
    assert main(["identify", "--dim", "3", "--keta", "15", "--ktau", "0"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["C"]["C_1212"] == pytest.approx(1.0, rel=1e-12)
    assert payload["derived"]["nu"] == pytest.approx(0.25, rel=1e-12)


def test_csv_output(capsys):
    assert main(["identify", "--dim", "2", "--keta", "8", "--ktau", "0",
                 "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "name,value"
    values = dict(line.split(",", 1) for line in lines[1:])
    assert float(values["C_1111"]) == pytest.approx(3.0, rel=1e-12)


def test_convert_subcommand(capsys):
    assert main(["convert", "--dim", "2", "--young", "1", "--nu",
                 "0.3333333333333333"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["derived"]["kbar_eta"] == pytest.approx(3.0, rel=1e-12)
    assert payload["derived"]["kbar_tau"] == pytest.approx(0.0, abs=1e-12)


def test_table_subcommand(capsys):
    assert main(["table", "--dim", "2", "--keta", "8", "--ktau", "2"]) == 0
    payload = json.loads(capsys.readouterr().out)
    rows = {r["name"]: r["value"] for r in payload["C_groups"]}
    assert rows == pytest.approx({"axial": 4.0, "cross": 0.0, "shear": 2.0})


def test_diff_legacy_subcommand(capsys):
    assert main(["diff-legacy", "--dim", "2", "--keta", "2",
                 "--ktau", "1"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["significant"] is True


def test_verify_subcommand(tmp_path):
    out = tmp_path / "verify.json"
    assert main(["verify", "--samples", "5", "--out", str(out)]) == 0
    payload = json.loads(out.read_text())
    assert payload["passed"] is True


def test_config_file_merging(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"dim": 2, "L": 1.0, "keta": 8.0,
                               "ktau": 0.0}))
    assert main(["identify", "--config", str(cfg)]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["meta"]["dim"] == 2
    # flags override config values
    assert main(["identify", "--config", str(cfg), "--keta", "16",
                 "--ktau", "0"]) == 0
    payload = json.loads(capsys.readouterr().out)
    assert payload["C"]["C_1111"] == pytest.approx(6.0, rel=1e-12)


def test_usage_errors_exit_2(tmp_path, capsys):
    assert main(["identify", "--keta", "1", "--ktau", "0"]) == 2
    assert main(["identify", "--dim", "2"]) == 2
    assert main(["identify", "--dim", "2", "--dist", "biased-c1",
                 "--dist-param", "beta"]) == 2
    assert main(["identify", "--dim", "2", "--dist", "biased-c1",
                 "--dist-param", "beta=x"]) == 2
    missing = tmp_path / "missing.json"
    assert main(["identify", "--dim", "2", "--keta", "1", "--ktau", "0",
                 "--config", str(missing)]) == 2
    capsys.readouterr()


def test_domain_errors_exit_2(capsys):
    assert main(["table", "--dim", "2", "--dist", "biased-c1"]) == 2
    assert "isotropic" in capsys.readouterr().err
    assert main(["convert", "--dim", "3", "--young", "1", "--nu",
                 "0.5"]) == 2
    assert main(["identify", "--dim", "2", "--keta", "1", "--ktau", "1",
                 "--young", "1", "--nu", "0.3"]) == 2
    capsys.readouterr()


def test_verify_failure_exit_code(monkeypatch, capsys):
    # force one failing check to confirm the exit code contract
    from grainstiff.checks import CheckResult

    def fake_run(seed=12345, samples=40):
        return [CheckResult(name="forced", passed=False, max_violation=1.0,
                            tolerance=0.0, detail="")]

    import grainstiff.service as service_mod
    monkeypatch.setattr(service_mod, "run_all_checks", fake_run)
    assert main(["verify"]) == 1
    capsys.readouterr()
