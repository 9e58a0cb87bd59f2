import json

import pytest

from renewalspec import acceptance
from renewalspec.cli import main


def test_list_models(capsys):
    assert main(["list-models"]) == 0
    out = capsys.readouterr().out
    assert "exponential" in out and "rational" in out


def test_list_schemes(capsys):
    assert main(["list-schemes"]) == 0
    out = capsys.readouterr().out
    assert "gamma" in out and "deterministic" in out


def test_missing_config_is_config_error(tmp_path, capsys):
    assert main(["run", "--config", str(tmp_path / "nope.json")]) == 2


def test_invalid_experiment_is_config_error(tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"experiment": "nope"}))
    assert main(["run", "--config", str(cfg)]) == 2
    assert "configuration error" in capsys.readouterr().err


def test_run_spectrum_tables(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "experiment": "spectrum_tables",
        "model": {"name": "exponential", "d": 0.25},
    }))
    code = main(["run", "--config", str(cfg), "--output-dir", str(tmp_path / "out"),
                 "--single-worker"])
    assert code == 0
    assert (tmp_path / "out" / "spectrum.csv").exists()
    assert (tmp_path / "out" / "manifest.json").exists()


def test_default_output_dir_env(tmp_path, monkeypatch):
    monkeypatch.setenv("RENEWALSPEC_OUTPUT_DIR", str(tmp_path / "env-out"))
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({
        "experiment": "spectrum_tables",
        "model": {"name": "exponential", "d": 0.25},
    }))
    assert main(["run", "--config", str(cfg), "--single-worker"]) == 0
    assert (tmp_path / "env-out" / "spectrum.csv").exists()


def test_acceptance_exit_code(tmp_path, monkeypatch, capsys):
    cfg = tmp_path / "acc.json"
    cfg.write_text(json.dumps({"experiment": "acceptance_suite",
                               "output_dir": str(tmp_path / "acc-out")}))

    def fake_run_all(output_dir, workers=1):
        return [acceptance.CheckResult(1, "stub", "0", "0", "exact", False)]

    monkeypatch.setattr(acceptance, "run_all", fake_run_all)
    assert main(["run", "--config", str(cfg)]) == 1
    out = capsys.readouterr().out
    assert "[FAIL]" in out

    def fake_pass(output_dir, workers=1):
        return [acceptance.CheckResult(1, "stub", "0", "0", "exact", True)]

    monkeypatch.setattr(acceptance, "run_all", fake_pass)
    assert main(["run", "--config", str(cfg)]) == 0
