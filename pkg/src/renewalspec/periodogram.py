"""Periodogram at Fourier frequencies and Monte Carlo limit-moment checks.

The periodogram is I_n(lam_j) = |sum_{k=1}^n Y_k e^{ik lam_j}|^2 / (2 pi n)
at lam_j = 2 pi j / n.  The normalized cosine/sine components

    (2 pi n f_Y(lam_j))^(-1/2) * sum Y_k cos(k lam_j)   (same with sin)

reconstruct the ratio I_n/f_Y as the sum of their squares.

``ratio_moments`` samples those components exactly: conditionally on the
grid they are jointly Gaussian with covariance W' Sigma_T W for the fixed
weight matrix W, so drawing the grid and then a Gaussian vector with that
small projected covariance reproduces the unconditional law of the ratios
without simulating the whole path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cholesky

from . import _fastcov
from .montecarlo import run_replicates
from .sampled_spectrum import SampledSpectrum, LimitConstants, limit_constants
from .sampling import SamplingScheme
from .spectral_models import SpectralModel, covariance_table

__all__ = ["PeriodogramFrame", "TrigComponents", "periodogram",
           "RatioMomentsRow", "RatioCrossRow", "RatioMomentsResult", "ratio_moments"]


@dataclass(frozen=True)
class TrigComponents:
    cos_part: float
    sin_part: float
    f_y_value: float


@dataclass(frozen=True)
class PeriodogramFrame:
    """Ordinates at lam_j, j = 1..floor(n/2), plus normalized trig parts at
    selected indices (those need a spectral density value)."""

    n: int
    frequencies: np.ndarray = field(repr=False)
    ordinates: np.ndarray = field(repr=False)
    trig: dict[int, TrigComponents] = field(default_factory=dict, repr=False)
    mean_removed: bool = False


def periodogram(path, f_y=None, trig_j=(), remove_mean: bool = False) -> PeriodogramFrame:
    """Periodogram of one path; the sum index starts at k = 1.

    ``trig_j`` asks for normalized cosine/sine components at those Fourier
    indices, which requires ``f_y`` (a callable x -> f_Y(x)).  No mean is
    removed unless requested: the modelled process is zero-mean.
    """
    y = np.asarray(path, dtype=float)
    if y.ndim != 1 or y.size < 4:
        raise ValueError("path must be 1-d with at least 4 points")
    n = y.size
    if remove_mean:
        y = y - y.mean()
    m = n // 2
    freqs = 2.0 * math.pi * np.arange(1, m + 1) / n
    spec = np.fft.rfft(y)[1:m + 1]
    ordinates = (spec.real ** 2 + spec.imag ** 2) / (2.0 * math.pi * n)
    trig: dict[int, TrigComponents] = {}
    if trig_j:
        if f_y is None:
            raise ValueError("trig components need an f_y callable for normalization")
        k = np.arange(1, n + 1)
        for j in trig_j:
            if not 1 <= j <= m:
                raise ValueError(f"trig index {j} outside 1..{m}")
            lam = 2.0 * math.pi * j / n
            fy = float(f_y(lam))
            norm = math.sqrt(2.0 * math.pi * n * fy)
            trig[int(j)] = TrigComponents(
                cos_part=float(np.dot(y, np.cos(k * lam))) / norm,
                sin_part=float(np.dot(y, np.sin(k * lam))) / norm,
                f_y_value=fy,
            )
    return PeriodogramFrame(n=n, frequencies=freqs, ordinates=ordinates,
                            trig=trig, mean_removed=remove_mean)


# ---------------------------------------------------------------------------
# Monte Carlo of the normalized ordinates against the limit constants
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RatioMomentsRow:
    j: int
    lambda_j: float
    mc_mean_ratio: float
    mc_se: float
    L_j: float
    R_j: float
    var_cos: float
    var_sin: float
    pred_var_cos: float
    pred_var_sin: float
    cos_sin_corr: float
    corr_se: float


@dataclass(frozen=True)
class RatioCrossRow:
    j: int
    k: int
    cov_cos: float
    cov_sin: float
    cov_se: float
    pred_cov_cos: float
    pred_cov_sin: float


@dataclass(frozen=True)
class RatioMomentsResult:
    n: int
    reps: int
    rows: list[RatioMomentsRow]
    cross: list[RatioCrossRow]
    samples: np.ndarray = field(repr=False)   # (reps, 2s): cos/sin per index


def _ratio_replicate(payload, rng, idx):
    table, scheme, n, weights = payload
    times = np.cumsum(scheme.sample_intervals(n, rng))
    m = _fastcov.projected_covariance(table, times, weights)
    k = m.shape[0]
    try:
        f = cholesky(m, lower=True, check_finite=False)
    except np.linalg.LinAlgError:
        m[np.arange(k), np.arange(k)] += 1e-12 * np.trace(m) / k
        f = cholesky(m, lower=True, check_finite=False)
    return f @ rng.standard_normal(k)


def ratio_moments(model: SpectralModel, scheme: SamplingScheme, n: int,
                  reps: int, j_set, seed: int, workers: int = 1) -> RatioMomentsResult:
    """Monte Carlo moments of I_n(lam_j)/f_Y(lam_j) for j in j_set.

    Cross-frequency rows compare the cosine/sine covariances against the
    predicted L_jk -+ R_jk.
    """
    j_set = sorted(int(j) for j in j_set)
    if len(set(j_set)) != len(j_set):
        raise ValueError("j_set must be distinct")
    if not j_set or j_set[0] < 1 or j_set[-1] > n // 2:
        raise ValueError("j_set must lie within 1..n/2")
    spectrum = SampledSpectrum(model, scheme)
    fy = {j: spectrum.f_y(2.0 * math.pi * j / n) for j in j_set}
    k_idx = np.arange(1, n + 1)
    cols = []
    for j in j_set:
        lam = 2.0 * math.pi * j / n
        norm = math.sqrt(2.0 * math.pi * n * fy[j])
        cols.append(np.cos(k_idx * lam) / norm)
        cols.append(np.sin(k_idx * lam) / norm)
    weights = np.ascontiguousarray(np.stack(cols, axis=1))
    table = covariance_table(model, n * scheme.mean_interval * 1.5 + 64.0)
    samples = run_replicates(_ratio_replicate, reps, seed=seed, stream="ratio-moments",
                             payload=(table, scheme, n, weights), workers=workers)
    rows = []
    for pos, j in enumerate(j_set):
        c = samples[:, 2 * pos]
        s = samples[:, 2 * pos + 1]
        ratio = c * c + s * s
        lc = limit_constants(model.d, j)
        var_c = float(c.var(ddof=1))
        var_s = float(s.var(ddof=1))
        corr = float(np.corrcoef(c, s)[0, 1])
        rows.append(RatioMomentsRow(
            j=j, lambda_j=2.0 * math.pi * j / n,
            mc_mean_ratio=float(ratio.mean()),
            mc_se=float(ratio.std(ddof=1) / math.sqrt(reps)),
            L_j=lc.L_j, R_j=lc.R_j,
            var_cos=var_c, var_sin=var_s,
            pred_var_cos=lc.L_j * lc.var_z1, pred_var_sin=lc.L_j * lc.var_z2,
            cos_sin_corr=corr, corr_se=1.0 / math.sqrt(reps),
        ))
    cross = []
    for a in range(len(j_set)):
        for b in range(a + 1, len(j_set)):
            j, k = j_set[a], j_set[b]
            lc = limit_constants(model.d, j, k)
            ca, sa = samples[:, 2 * a], samples[:, 2 * a + 1]
            cb, sb = samples[:, 2 * b], samples[:, 2 * b + 1]
            cov_c = float(np.cov(ca, cb, ddof=1)[0, 1])
            cov_s = float(np.cov(sa, sb, ddof=1)[0, 1])
            se = math.sqrt((float(ca.var(ddof=1)) * float(cb.var(ddof=1)) + cov_c ** 2) / reps)
            cross.append(RatioCrossRow(
                j=j, k=k, cov_cos=cov_c, cov_sin=cov_s, cov_se=se,
                pred_cov_cos=lc.L_jk - lc.R_jk, pred_cov_sin=lc.L_jk + lc.R_jk,
            ))
    return RatioMomentsResult(n=n, reps=reps, rows=rows, cross=cross, samples=samples)
