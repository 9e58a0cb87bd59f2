"""Config-driven experiments with CSV outputs and a reproducibility manifest.

A config is a JSON file (nested key/value).  All randomness derives from the
single root seed via (seed, stream-name, replicate-index) keyed generators,
so re-running a resolved config reproduces every CSV byte for byte; the
``single_worker`` flag additionally pins BLAS to one thread for
factorizations, making runs bitwise stable across machines with the same
libraries.
"""

from __future__ import annotations

import hashlib
import json
import math
import os
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path

import numpy as np

from . import __version__
from .estimators import long_run_variance, whittle_fit
from .montecarlo import default_workers, run_replicates
from .periodogram import periodogram, ratio_moments
from .sampled_spectrum import SampledSpectrum
from .sampling import scheme_from_config
from .simulate import DENSE_N_CAP, _path_replicate
from .spectral_models import covariance_table, model_from_config
from .cumulants import cumulant_double_sum, cumulant_triple_sum

__all__ = ["ExperimentConfig", "RunManifest", "ConfigError", "run",
           "load_config", "EXPERIMENTS", "format_number", "write_csv"]

EXPERIMENTS = ("spectrum_tables", "ratio_moments", "whittle_study",
               "lrv_study", "cumulant_scaling", "acceptance_suite")


class ConfigError(ValueError):
    """Invalid experiment configuration."""


@dataclass
class ExperimentConfig:
    experiment: str
    model: dict = field(default_factory=lambda: {"name": "exponential", "d": 0.25})
    scheme: dict = field(default_factory=lambda: {"name": "exponential", "rate": 1.0})
    n: int | None = None
    n_list: list | None = None
    reps: int | None = None
    seed: int = 20240801
    j_set: list | None = None
    h: int = 1
    bandwidth_exponent: float = 0.6
    q_exponent: float = 0.4
    output_dir: str = ""
    workers: int | None = None
    single_worker: bool = False
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    dump_paths: bool = False

    def resolved(self) -> "ExperimentConfig":
        cfg = ExperimentConfig(**{**asdict(self)})
        if cfg.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {cfg.experiment!r}; "
                              f"choose one of {', '.join(EXPERIMENTS)}")
        defaults = {
            "spectrum_tables": dict(n=None, reps=None),
            "ratio_moments": dict(n=2048, reps=2000, j_set=[1, 2, 3]),
            "whittle_study": dict(n_list=[512, 2048], reps=100),
            "lrv_study": dict(n=4096, reps=500),
            "cumulant_scaling": dict(n_list=[8, 16, 32, 64], reps=100_000),
            "acceptance_suite": dict(),
        }[cfg.experiment]
        for key, val in defaults.items():
            if getattr(cfg, key) is None:
                setattr(cfg, key, val)
        if cfg.workers is None:
            cfg.workers = 1 if cfg.single_worker else default_workers()
        if cfg.single_worker:
            cfg.workers = 1
        if not cfg.output_dir:
            cfg.output_dir = os.environ.get("RENEWALSPEC_OUTPUT_DIR", "runs")
        for n in ([cfg.n] if cfg.n else []) + list(cfg.n_list or []):
            if cfg.experiment in ("ratio_moments", "whittle_study", "lrv_study") and n > DENSE_N_CAP:
                raise ConfigError(f"n={n} exceeds the simulation cap {DENSE_N_CAP}")
        # validate registry names early, with the registered sets in the message
        model_from_config(cfg.model.get("name", ""), float(cfg.model.get("d", 0.25)),
                          cfg.model.get("c"))
        scheme_from_config(cfg.scheme.get("name", ""),
                           {k: v for k, v in cfg.scheme.items() if k != "name"})
        return cfg


def load_config(path: str | Path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    unknown = set(raw) - set(ExperimentConfig.__dataclass_fields__)
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "experiment" not in raw:
        raise ConfigError("config must name an experiment")
    return ExperimentConfig(**raw)


@dataclass
class RunManifest:
    experiment: str
    resolved_config: dict
    version: str
    wall_seconds: float
    outputs: list
    checks: list

    @property
    def passed(self) -> bool:
        return all(c.get("passed", True) for c in self.checks)

    def write(self, path: Path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(asdict(self), fh, indent=2, sort_keys=True)
            fh.write("\n")


def format_number(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "1" if x else "0"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return f"{float(x):.17g}"


def write_csv(path: Path, header: list[str], rows) -> dict:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_number(v) for v in row) + "\n")
    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    return {"name": path.name, "path": str(path), "sha256": digest}


def _build_pair(cfg: ExperimentConfig):
    model = model_from_config(cfg.model["name"], float(cfg.model["d"]), cfg.model.get("c"))
    scheme = scheme_from_config(cfg.scheme["name"],
                                {k: v for k, v in cfg.scheme.items() if k != "name"})
    return model, scheme


# --- experiment bodies ------------------------------------------------------

def _exp_spectrum_tables(cfg, out):
    model, scheme = _build_pair(cfg)
    spectrum = SampledSpectrum(model, scheme, cfg.rel_tol, cfg.abs_tol)
    xs = np.pi * np.arange(1, 201) / 200.0
    rows = []
    for x in xs:
        fy = spectrum.f_y(float(x))
        fys = spectrum.f_y_star(float(x)) if scheme.kind == "exponential" else math.nan
        rows.append((x, fy, fys))
    outputs = [write_csv(out / "spectrum.csv", ["x", "f_Y", "f_Y_star"], rows)]
    srows = [(j, spectrum.sigma_y(j)) for j in range(31)]
    outputs.append(write_csv(out / "sigma_y.csv", ["j", "sigma_Y"], srows))
    return outputs, []


def _exp_ratio_moments(cfg, out):
    model, scheme = _build_pair(cfg)
    res = ratio_moments(model, scheme, cfg.n, cfg.reps, cfg.j_set, cfg.seed,
                        workers=cfg.workers)
    header = ["j", "lambda_j", "mc_mean_ratio", "mc_se", "L_j", "R_j",
              "var_cos", "var_sin", "pred_var_cos", "pred_var_sin"]
    rows = [(r.j, r.lambda_j, r.mc_mean_ratio, r.mc_se, r.L_j, r.R_j,
             r.var_cos, r.var_sin, r.pred_var_cos, r.pred_var_sin) for r in res.rows]
    outputs = [write_csv(out / "ratio_moments.csv", header, rows)]
    if res.cross:
        ch = ["j", "k", "cov_cos", "cov_sin", "cov_se", "pred_cov_cos", "pred_cov_sin"]
        crows = [(c.j, c.k, c.cov_cos, c.cov_sin, c.cov_se,
                  c.pred_cov_cos, c.pred_cov_sin) for c in res.cross]
        outputs.append(write_csv(out / "ratio_cross.csv", ch, crows))
    return outputs, []


def _whittle_replicate(payload, rng, idx):
    table, scheme, n, m = payload
    row = _path_replicate((table, scheme, n), rng, idx)
    frame = periodogram(row[:n])
    fit = whittle_fit(frame, m)
    return np.array([fit.d_hat])


def _exp_whittle_study(cfg, out):
    model, scheme = _build_pair(cfg)
    a = cfg.bandwidth_exponent
    rep_rows, summary = [], []
    for n in cfg.n_list:
        m = int(n ** a)
        table = covariance_table(model, n * scheme.mean_interval * 1.5 + 64.0)
        d_hats = run_replicates(_whittle_replicate, cfg.reps, seed=cfg.seed,
                                stream=f"whittle-{n}", payload=(table, scheme, n, m),
                                workers=cfg.workers)[:, 0]
        rep_rows.extend((i, n, m, dh) for i, dh in enumerate(d_hats))
        err = d_hats - model.d
        summary.append((n, m, float(d_hats.mean()), float(np.sqrt(np.mean(err ** 2))),
                        float(np.mean(np.abs(err)))))
    outputs = [
        write_csv(out / "whittle_reps.csv", ["rep", "n", "m", "d_hat"], rep_rows),
        write_csv(out / "whittle_summary.csv",
                  ["n", "m", "mean_d_hat", "rmse", "mean_abs_err"], summary),
    ]
    return outputs, []


def _lrv_replicate(payload, rng, idx):
    table, scheme, n, m, q = payload
    row = _path_replicate((table, scheme, n), rng, idx)
    y = row[:n]
    frame = periodogram(y)
    fit = whittle_fit(frame, m)
    est = long_run_variance(y, fit.d_hat, q)
    ybar = float(y.mean())
    stat = n ** (0.5 - fit.d_hat) * ybar / math.sqrt(max(est.s2_hat, 1e-300))
    return np.array([fit.d_hat, est.s2_hat, ybar, stat])


def _exp_lrv_study(cfg, out):
    model, scheme = _build_pair(cfg)
    n = cfg.n
    m = int(n ** cfg.bandwidth_exponent)
    q = int(n ** cfg.q_exponent)
    table = covariance_table(model, n * scheme.mean_interval * 1.5 + 64.0)
    rows = run_replicates(_lrv_replicate, cfg.reps, seed=cfg.seed, stream=f"lrv-{n}",
                          payload=(table, scheme, n, m, q), workers=cfg.workers)
    rep_rows = [(i, n, q, r[0], r[1]) for i, r in enumerate(rows)]
    outputs = [write_csv(out / "lrv_reps.csv",
                         ["rep", "n", "q", "d_used", "s2_hat"], rep_rows)]
    stats = rows[:, 3]
    var = float(stats.var(ddof=1))
    z = (stats - stats.mean()) / stats.std(ddof=0)
    skew = float(np.mean(z ** 3))
    outputs.append(write_csv(out / "lrv_summary.csv",
                             ["n", "m", "q", "stat_variance", "stat_skewness"],
                             [(n, m, q, var, skew)]))
    return outputs, []


def _exp_cumulant_scaling(cfg, out):
    model, scheme = _build_pair(cfg)
    drows, trows = [], []
    for n in cfg.n_list:
        if n > 64:
            raise ConfigError(f"cumulant n={n} above the 64 cap")
        est = cumulant_double_sum(model, scheme, n, cfg.h, cfg.reps, cfg.seed)
        drows.append((n, cfg.h, est.value, est.standard_error))
        if n <= 32:
            trip = cumulant_triple_sum(model, scheme, n, min(cfg.reps, 60_000), cfg.seed)
            trows.append((n, trip.value, trip.standard_error))
    outputs = [write_csv(out / "cumulant_double.csv",
                         ["n", "h", "double_sum", "se"], drows)]
    if trows:
        outputs.append(write_csv(out / "cumulant_triple.csv",
                                 ["n", "triple_sum", "se"], trows))
    return outputs, []


def _exp_acceptance(cfg, out):
    from .acceptance import run_all
    checks = run_all(out, workers=cfg.workers)
    rows = [(c.criterion, c.name, c.measured, c.target, c.tolerance, int(c.passed))
            for c in checks]
    outputs = [write_csv(out / "acceptance.csv",
                         ["criterion", "name", "measured", "target", "tolerance", "passed"],
                         rows)]
    return outputs, [c.as_dict() for c in checks]


_BODIES = {
    "spectrum_tables": _exp_spectrum_tables,
    "ratio_moments": _exp_ratio_moments,
    "whittle_study": _exp_whittle_study,
    "lrv_study": _exp_lrv_study,
    "cumulant_scaling": _exp_cumulant_scaling,
    "acceptance_suite": _exp_acceptance,
}


def run(config: ExperimentConfig) -> RunManifest:
    """Resolve, dispatch, write CSVs plus manifest.json into output_dir."""
    cfg = config.resolved()
    out = Path(cfg.output_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        probe = out / ".write-probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise ConfigError(f"output directory {out} is not writable: {exc}") from exc
    t0 = time.time()
    if cfg.single_worker:
        from threadpoolctl import threadpool_limits
        with threadpool_limits(limits=1):
            outputs, checks = _BODIES[cfg.experiment](cfg, out)
    else:
        outputs, checks = _BODIES[cfg.experiment](cfg, out)
    manifest = RunManifest(
        experiment=cfg.experiment,
        resolved_config=asdict(cfg),
        version=__version__,
        wall_seconds=time.time() - t0,
        outputs=outputs,
        checks=checks,
    )
    manifest.write(out / "manifest.json")
    return manifest
