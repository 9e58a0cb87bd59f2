"""Fused covariance kernels over a time grid.

Dense conditional covariance matrices need sigma_X at every pairwise lag of
the grid: ~n^2/2 lookups, which dominates the simulation cost at n in the
thousands.  These kernels fuse the lag computation, the log-spaced cubic
table lookup and the downstream accumulation into one pass so nothing of
size n^2 is materialized unless the caller needs the matrix itself.

numba is used when importable; the pure-numpy fallbacks compute identical
values (same table polynomial), just slower and with n^2 temporaries.
"""

from __future__ import annotations

import math

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except Exception:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        def wrap(fn):
            return fn
        if args and callable(args[0]):
            return args[0]
        return wrap


@njit(cache=True, inline="always")
def _sig(x, sigma0, x_lo, two_d, v_lo, u0a, inv_dua, ca, u0b, inv_dub, cb, seam, umax):
    if x <= 0.0:
        return sigma0
    if x < x_lo:
        return sigma0 - (sigma0 - v_lo) * (x / x_lo) ** two_d
    u = math.log(x)
    if u < seam:
        pos = (u - u0a) * inv_dua
        i = int(pos)
        if i > ca.shape[0] - 1:
            i = ca.shape[0] - 1
        t = pos - i
        return ca[i, 0] + t * (ca[i, 1] + t * (ca[i, 2] + t * ca[i, 3]))
    pos = (u - u0b) * inv_dub
    i = int(pos)
    if i > cb.shape[0] - 1:
        i = cb.shape[0] - 1
    t = pos - i
    return cb[i, 0] + t * (cb[i, 1] + t * (cb[i, 2] + t * cb[i, 3]))


@njit(cache=True)
def _cov_fill_lower_jit(tgrid, out, sigma0, x_lo, two_d, v_lo, u0a, inv_dua, ca,
                        u0b, inv_dub, cb, seam, umax):
    n = tgrid.size
    for i in range(n):
        out[i, i] = sigma0
        ti = tgrid[i]
        for j in range(i):
            out[i, j] = _sig(ti - tgrid[j], sigma0, x_lo, two_d, v_lo,
                             u0a, inv_dua, ca, u0b, inv_dub, cb, seam, umax)


@njit(cache=True)
def _mirror_lower_jit(out):
    n = out.shape[0]
    b = 240
    for ib in range(0, n, b):
        i_hi = min(ib + b, n)
        for jb in range(0, i_hi, b):
            for i in range(ib, i_hi):
                j_hi = min(jb + b, i)
                for j in range(jb, j_hi):
                    out[j, i] = out[i, j]


@njit(cache=True)
def _proj_lower_jit(tgrid, w, p, sigma0, x_lo, two_d, v_lo, u0a, inv_dua, ca,
                    u0b, inv_dub, cb, seam, umax):
    n, k = w.shape
    for i in range(n):
        ti = tgrid[i]
        for j in range(i):
            s = _sig(ti - tgrid[j], sigma0, x_lo, two_d, v_lo,
                     u0a, inv_dua, ca, u0b, inv_dub, cb, seam, umax)
            for a in range(k):
                p[i, a] += s * w[j, a]


@njit(cache=True)
def _pair_sum_jit(tgrid, sigma0, x_lo, two_d, v_lo, u0a, inv_dua, ca,
                  u0b, inv_dub, cb, seam, umax):
    n = tgrid.size
    acc = 0.0
    for i in range(n):
        ti = tgrid[i]
        for j in range(i):
            acc += _sig(ti - tgrid[j], sigma0, x_lo, two_d, v_lo,
                        u0a, inv_dua, ca, u0b, inv_dub, cb, seam, umax)
    return acc


def conditional_covariance_matrix(table, times: np.ndarray,
                                  lower_only: bool = False) -> np.ndarray:
    """Matrix sigma_X(|T_i - T_j|), diagonal sigma_X(0).

    With ``lower_only`` the strict upper triangle is left unset (cheaper;
    enough for a lower-triangular factorization).
    """
    t = np.ascontiguousarray(times, dtype=float)
    n = t.size
    out = np.empty((n, n))
    if HAVE_NUMBA:
        _cov_fill_lower_jit(t, out, *table.pack())
        if not lower_only:
            _mirror_lower_jit(out)
        return out
    lags = np.abs(t[:, None] - t[None, :])
    out[:] = table(lags)
    np.fill_diagonal(out, table.sigma0)
    return out


def projected_covariance(table, times: np.ndarray, weights: np.ndarray) -> np.ndarray:
    """M = W' Sigma W for the conditional covariance Sigma, without storing it.

    weights has shape (n, k); the result is (k, k).
    """
    t = np.ascontiguousarray(times, dtype=float)
    w = np.ascontiguousarray(weights, dtype=float)
    if HAVE_NUMBA:
        p = np.zeros_like(w)
        _proj_lower_jit(t, w, p, *table.pack())
        m_low = w.T @ p
        return table.sigma0 * (w.T @ w) + m_low + m_low.T
    sig = conditional_covariance_matrix(table, t)
    return w.T @ sig @ w


def pairwise_covariance_sum(table, times: np.ndarray) -> float:
    """sum_{i<j} sigma_X(T_i - T_j); the grid-conditional variance of the
    path sum is n*sigma0 + 2*this."""
    t = np.ascontiguousarray(times, dtype=float)
    if HAVE_NUMBA:
        return float(_pair_sum_jit(t, *table.pack()))
    lags = np.abs(t[:, None] - t[None, :])
    sig = table(lags)
    iu = np.triu_indices(t.size, k=1)
    return float(sig[iu].sum())
