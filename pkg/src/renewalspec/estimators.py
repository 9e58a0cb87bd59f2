"""Semiparametric inference from one sampled path: local Whittle memory
estimation and the rescaled Bartlett long-run variance estimator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .periodogram import PeriodogramFrame

__all__ = ["WhittleFit", "LongRunVarianceEstimate", "sample_autocovariance",
           "whittle_loss", "whittle_fit", "long_run_variance"]

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class WhittleFit:
    """Result of minimizing the local Whittle loss over [-1/2, 1/2]."""

    d_hat: float
    m: int
    n: int
    grid_resolution: float
    loss_curve: np.ndarray = field(repr=False)   # (grid points, 2): alpha, loss


@dataclass(frozen=True)
class LongRunVarianceEstimate:
    s2_hat: float
    q: int
    d_used: float
    gamma_hat: np.ndarray = field(repr=False)    # lags 0..q


def sample_autocovariance(path, h: int) -> float:
    """(1/n) sum_{j<=n-h} (Y_j - Ybar)(Y_{j+h} - Ybar)."""
    y = np.asarray(path, dtype=float)
    n = y.size
    if not 0 <= h < n:
        raise ValueError(f"lag h={h} outside 0..n-1")
    z = y - y.mean()
    if h == 0:
        return float(z @ z) / n
    return float(z[:-h] @ z[h:]) / n


def _loss_terms(frame: PeriodogramFrame, m: int):
    if not 1 <= m <= frame.n // 2:
        raise ValueError(f"bandwidth m={m} outside 1..n/2")
    ords = frame.ordinates[:m]
    if not (ords > 0).any():
        raise ValueError("all periodogram ordinates in the band are zero")
    loglam = np.log(frame.frequencies[:m])
    return ords, loglam


def whittle_loss(frame: PeriodogramFrame, m: int, alpha: float) -> float:
    """log( mean_j lam_j^(2 alpha) I(lam_j) ) - (2 alpha) mean_j log lam_j."""
    if not -0.5 <= alpha <= 0.5:
        raise ValueError("alpha must lie in [-1/2, 1/2]")
    ords, loglam = _loss_terms(frame, m)
    return float(np.log(np.mean(ords * np.exp(2.0 * alpha * loglam)))
                 - 2.0 * alpha * loglam.mean())


def whittle_fit(frame: PeriodogramFrame, m: int, coarse_points: int = 64,
                resolution: float = 1e-6) -> WhittleFit:
    """Coarse grid scan then golden-section refinement of the global argmin.

    The loss need not be unimodal for small bandwidths, hence the scan; ties
    on the grid break toward the smaller |alpha|.
    """
    ords, loglam = _loss_terms(frame, m)
    mean_loglam = loglam.mean()

    def loss(alpha):
        return float(np.log(np.mean(ords * np.exp(2.0 * alpha * loglam)))
                     - 2.0 * alpha * mean_loglam)

    grid = np.linspace(-0.5, 0.5, coarse_points)
    values = np.array([loss(a) for a in grid])
    best = np.flatnonzero(values == values.min())
    i0 = best[np.argmin(np.abs(grid[best]))]
    lo = grid[max(i0 - 1, 0)]
    hi = grid[min(i0 + 1, coarse_points - 1)]

    x1 = hi - _GOLDEN * (hi - lo)
    x2 = lo + _GOLDEN * (hi - lo)
    f1, f2 = loss(x1), loss(x2)
    while hi - lo > resolution:
        if f1 <= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _GOLDEN * (hi - lo)
            f1 = loss(x1)
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _GOLDEN * (hi - lo)
            f2 = loss(x2)
    d_hat = 0.5 * (lo + hi)
    if loss(float(grid[i0])) < loss(d_hat):
        d_hat = float(grid[i0])
    return WhittleFit(d_hat=float(np.clip(d_hat, -0.5, 0.5)), m=m, n=frame.n,
                      grid_resolution=float(hi - lo),
                      loss_curve=np.column_stack([grid, values]))


def long_run_variance(path, d_used: float, q: int) -> LongRunVarianceEstimate:
    """q^(-2d) * ( gamma_hat(0) + 2 sum_{h=1}^q (1 - h/q) gamma_hat(h) )."""
    y = np.asarray(path, dtype=float)
    n = y.size
    if not 1 <= q < n:
        raise ValueError(f"truncation lag q={q} outside 1..n-1")
    gamma = np.array([sample_autocovariance(y, h) for h in range(q + 1)])
    weights = 1.0 - np.arange(1, q + 1) / q
    s2 = q ** (-2.0 * d_used) * (gamma[0] + 2.0 * float(weights @ gamma[1:]))
    return LongRunVarianceEstimate(s2_hat=float(s2), q=q, d_used=float(d_used),
                                   gamma_hat=gamma)
