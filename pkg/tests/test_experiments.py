import json
from pathlib import Path

import numpy as np
import pytest

from renewalspec.experiments import (ConfigError, ExperimentConfig, format_number,
                                     load_config, run)


def test_unknown_experiment_rejected():
    with pytest.raises(ConfigError):
        ExperimentConfig(experiment="frobnicate").resolved()


def test_unknown_scheme_lists_registry(tmp_path):
    cfg = ExperimentConfig(experiment="spectrum_tables",
                           scheme={"name": "weibull"},
                           output_dir=str(tmp_path))
    with pytest.raises(ValueError) as exc:
        cfg.resolved()
    msg = str(exc.value)
    assert "exponential" in msg and "gamma" in msg and "deterministic" in msg


def test_n_cap_rejected(tmp_path):
    cfg = ExperimentConfig(experiment="whittle_study", n_list=[16384], reps=1,
                           output_dir=str(tmp_path))
    with pytest.raises(ConfigError):
        cfg.resolved()


def test_unwritable_output_dir(tmp_path):
    blocker = tmp_path / "blocked"
    blocker.write_text("a file, not a directory")
    cfg = ExperimentConfig(experiment="spectrum_tables",
                           output_dir=str(blocker / "sub"))
    with pytest.raises(ConfigError):
        run(cfg)


def test_load_config_validation(tmp_path):
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps({"experiment": "spectrum_tables", "bogus": 1}))
    with pytest.raises(ConfigError):
        load_config(path)
    path.write_text(json.dumps({"n": 12}))
    with pytest.raises(ConfigError):
        load_config(path)


def test_format_number_17_digits():
    x = 1.0 / 3.0
    s = format_number(x)
    assert float(s) == x           # round-trips exactly
    assert format_number(7) == "7"
    assert format_number(True) == "1"


def test_spectrum_tables_run(tmp_path, exp_model):
    cfg = ExperimentConfig(experiment="spectrum_tables",
                           model={"name": "exponential", "d": 0.25},
                           output_dir=str(tmp_path / "out"))
    manifest = run(cfg)
    spectrum = (tmp_path / "out" / "spectrum.csv").read_text().splitlines()
    assert spectrum[0] == "x,f_Y,f_Y_star"
    assert len(spectrum) == 201
    x, fy, fys = map(float, spectrum[-1].split(","))
    assert x == pytest.approx(np.pi)
    assert fys == pytest.approx(x ** 0.5 * fy, rel=1e-12)
    sigma = (tmp_path / "out" / "sigma_y.csv").read_text().splitlines()
    assert sigma[0] == "j,sigma_Y" and len(sigma) == 32
    assert (tmp_path / "out" / "manifest.json").exists()
    assert manifest.passed


def test_whittle_study_outputs(tmp_path):
    cfg = ExperimentConfig(experiment="whittle_study", n_list=[128], reps=6,
                           seed=3, output_dir=str(tmp_path / "w"), workers=1)
    run(cfg)
    lines = (tmp_path / "w" / "whittle_summary.csv").read_text().splitlines()
    assert lines[0] == "n,m,mean_d_hat,rmse,mean_abs_err"
    reps = (tmp_path / "w" / "whittle_reps.csv").read_text().splitlines()
    assert len(reps) == 7


def test_manifest_rerun_reproduces_hashes(tmp_path):
    hashes = []
    for tag in ("a", "b"):
        cfg = ExperimentConfig(experiment="ratio_moments", n=64, reps=10,
                               j_set=[1, 2], seed=4, single_worker=True,
                               output_dir=str(tmp_path / tag))
        manifest = run(cfg)
        hashes.append({o["name"]: o["sha256"] for o in manifest.outputs})
    assert hashes[0] == hashes[1]


def test_lrv_study_outputs(tmp_path):
    cfg = ExperimentConfig(experiment="lrv_study", n=128, reps=5, seed=5,
                           output_dir=str(tmp_path / "l"), workers=1)
    run(cfg)
    lines = (tmp_path / "l" / "lrv_reps.csv").read_text().splitlines()
    assert lines[0] == "rep,n,q,d_used,s2_hat"
    assert len(lines) == 6
    summary = (tmp_path / "l" / "lrv_summary.csv").read_text().splitlines()
    assert summary[0] == "n,m,q,stat_variance,stat_skewness"


def test_cumulant_scaling_outputs(tmp_path):
    cfg = ExperimentConfig(experiment="cumulant_scaling", n_list=[8], reps=12_000,
                           seed=6, output_dir=str(tmp_path / "c"), workers=1)
    run(cfg)
    lines = (tmp_path / "c" / "cumulant_double.csv").read_text().splitlines()
    assert lines[0] == "n,h,double_sum,se"
    trip = (tmp_path / "c" / "cumulant_triple.csv").read_text().splitlines()
    assert trip[0] == "n,triple_sum,se"
