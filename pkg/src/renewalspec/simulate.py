"""Exact simulation of the sampled process.

Conditionally on the time grid, (Y_1, ..., Y_n) is a zero-mean Gaussian
vector with covariance sigma_X(|T_i - T_j|).  Each replicate draws a fresh
grid, builds that dense covariance and factorizes it, so the unconditional
law (which is *not* jointly Gaussian) is reproduced exactly; no stationary
fast-simulation shortcut applies to the irregular grid.

``simulate_mean_statistic`` exploits that the normalized sample mean is a
linear functional of the conditionally Gaussian vector: given the grid,
Ybar ~ N(0, 1'Sigma 1 / n^2), so one scalar conditional variance per grid
replaces the n^3 factorization.  The law of the output is identical to
averaging a fully simulated path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky

from . import _fastcov
from .montecarlo import run_replicates
from .sampling import SamplingScheme, TimeGrid, sample_grid
from .spectral_models import CovarianceTable, SpectralModel, covariance_table

__all__ = ["PathBatch", "FactorizationError", "conditional_covariance",
           "factor_covariance", "simulate_batch", "simulate_mean_statistic",
           "DENSE_N_CAP"]

DENSE_N_CAP = 8192

JITTER_LADDER = (0.0, 1e-12, 1e-11, 1e-10, 1e-9, 1e-8)


class FactorizationError(RuntimeError):
    """Covariance factorization failed at the maximum allowed jitter."""


@dataclass(frozen=True)
class PathBatch:
    """Simulated realizations of (Y_1, ..., Y_n), one row per replicate."""

    paths: np.ndarray = field(repr=False)
    model: SpectralModel
    scheme: SamplingScheme
    seed: int
    regularization_used: float
    shared_grid: bool = False
    grid: TimeGrid | None = None

    @property
    def reps(self) -> int:
        return self.paths.shape[0]

    @property
    def n(self) -> int:
        return self.paths.shape[1]


def _grid_x_max(scheme: SamplingScheme, n: int) -> float:
    mean = scheme.mean_interval
    return n * mean * 1.5 + 64.0


def conditional_covariance(model: SpectralModel, grid: TimeGrid,
                           table: CovarianceTable | None = None) -> np.ndarray:
    """n x n matrix sigma_X(|T_i - T_j|); symmetric, sigma_X(0) diagonal."""
    if table is None:
        table = covariance_table(model, float(grid.times[-1]) * 1.1)
    if grid.times[-1] > table.x_max:
        raise ValueError("grid extends beyond the covariance table range")
    return _fastcov.conditional_covariance_matrix(table, grid.times)


def factor_covariance(sigma: np.ndarray, sigma0: float,
                      grid_label: str = "") -> tuple[np.ndarray, float]:
    """Lower-triangular factor with escalating diagonal jitter.

    Returns (factor, absolute jitter used).  Only the lower triangle of
    ``sigma`` is referenced; ``sigma`` is left untouched.
    """
    n = sigma.shape[0]
    idx = np.arange(n)
    for rel in JITTER_LADDER:
        work = sigma.copy()
        if rel:
            work[idx, idx] += rel * sigma0
        try:
            f = cholesky(work, lower=True, overwrite_a=True, check_finite=False)
            return f, rel * sigma0
        except np.linalg.LinAlgError:
            continue
    raise FactorizationError(
        f"covariance not positive definite at maximum jitter "
        f"{JITTER_LADDER[-1]:g}*sigma_X(0){' for grid ' + grid_label if grid_label else ''}")


def _normal_vector_replicate(n, rng, idx):
    return rng.standard_normal(n)


def _path_replicate(payload, rng, idx):
    table, scheme, n = payload
    times = np.cumsum(scheme.sample_intervals(n, rng))
    sigma = _fastcov.conditional_covariance_matrix(table, times, lower_only=True)
    f, jitter = factor_covariance(sigma, table.sigma0, grid_label=f"replicate {idx}")
    y = f @ rng.standard_normal(n)
    out = np.empty(n + 1)
    out[:n] = y
    out[n] = jitter
    return out


def simulate_batch(model: SpectralModel, scheme: SamplingScheme, n: int,
                   reps: int, seed: int, workers: int = 1,
                   shared_grid: bool = False, n_cap: int = DENSE_N_CAP) -> PathBatch:
    """Simulate ``reps`` realizations of (Y_1, ..., Y_n).

    Default mode draws a fresh grid per replicate (the joint draw of times
    and values).  ``shared_grid`` freezes one grid and draws many value
    vectors from the conditional law, for conditional-distribution
    diagnostics.
    """
    if n < 1 or reps < 1:
        raise ValueError("n and reps must be >= 1")
    if n > n_cap:
        raise ValueError(f"n={n} exceeds the dense factorization cap {n_cap}; "
                         "raise n_cap explicitly if you accept the cost")
    table = covariance_table(model, _grid_x_max(scheme, n))
    if shared_grid:
        grid = sample_grid(scheme, n, seed)
        sigma = _fastcov.conditional_covariance_matrix(table, grid.times, lower_only=True)
        f, jitter = factor_covariance(sigma, table.sigma0, grid_label=f"seed {seed}")
        z = run_replicates(_normal_vector_replicate, reps, seed=seed,
                           stream="shared-grid-values", payload=n, workers=1)
        return PathBatch(paths=z @ f.T, model=model, scheme=scheme, seed=seed,
                         regularization_used=jitter, shared_grid=True, grid=grid)
    rows = run_replicates(_path_replicate, reps, seed=seed, stream="path-batch",
                          payload=(table, scheme, n), workers=workers)
    grid = None
    if reps == 1:
        from .montecarlo import derive_rng
        rng = derive_rng(seed, "path-batch", 0)
        grid = TimeGrid(np.cumsum(scheme.sample_intervals(n, rng)), seed, scheme)
    return PathBatch(paths=rows[:, :n], model=model, scheme=scheme, seed=seed,
                     regularization_used=float(rows[:, n].max()),
                     shared_grid=False, grid=grid)


def _mean_stat_replicate(payload, rng, idx):
    table, scheme, n, d = payload
    times = np.cumsum(scheme.sample_intervals(n, rng))
    pair_sum = _fastcov.pairwise_covariance_sum(table, times)
    cond_var = (n * table.sigma0 + 2.0 * pair_sum) / float(n) ** 2
    stat = n ** (0.5 - d) * math.sqrt(cond_var) * rng.standard_normal()
    return np.array([stat])


def simulate_mean_statistic(model: SpectralModel, scheme: SamplingScheme, n: int,
                            reps: int, seed: int, workers: int = 1) -> np.ndarray:
    """Replicates of n^(1/2-d) * Ybar_n, drawn exactly via the conditional
    variance of the path mean (no dense factorization)."""
    if n < 1 or reps < 1:
        raise ValueError("n and reps must be >= 1")
    table = covariance_table(model, _grid_x_max(scheme, n))
    rows = run_replicates(_mean_stat_replicate, reps, seed=seed, stream="mean-statistic",
                          payload=(table, scheme, n, model.d), workers=workers)
    return rows[:, 0]
