"""Continuous-time long-memory spectral densities f_X(lam) = c |lam|^(-2d) (1 - h(lam)).

The regular factor h is nondecreasing with h(0)=0 and h(inf)=1, so f_X has a
pure power singularity at the origin and decays at least as fast as the
factor (1 - h).  The autocovariance is the cosine transform of f_X, computed
by quadrature; its large-lag behaviour is

    sigma_X(x) = 2 c Gamma(1-2d) sin(pi d) x^(2d-1) + (remainder),

with the remainder uniformly O(1/x).  A log-spaced interpolation table makes
sigma_X cheap enough for dense covariance matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.special import gamma as gamma_fn

from .montecarlo import derive_rng
from .quadrature import Integrand, integrate_semiaxis

__all__ = [
    "SpectralModel", "CovarianceDecomposition", "covariance_tail_constant",
    "exponential_model", "rational_model", "model_from_config", "MODEL_NAMES",
    "CovarianceTable", "covariance_table", "VarianceEstimate",
    "var_sigma_x_at_poisson_times",
]

MODEL_NAMES = ("exponential", "rational")


def covariance_tail_constant(d: float) -> float:
    """Coefficient of x^(2d-1) in the autocovariance tail when 2c = 1.

    Equals Gamma(1-2d) sin(pi d); multiply by 2c for a general level constant.
    """
    if not 0.0 < d < 0.5:
        raise ValueError("d must lie in (0, 1/2)")
    return gamma_fn(1.0 - 2.0 * d) * math.sin(math.pi * d)


@dataclass(frozen=True)
class CovarianceDecomposition:
    """sigma_X(x) = leading_constant * x^(2d-1) + g(x), |g(x)| <= remainder_bound / x."""

    leading_constant: float
    remainder_bound: float


@dataclass(frozen=True)
class SpectralModel:
    """f_X(lam) = c |lam|^(-2d) (1 - h(|lam|)) with memory parameter d in (0, 1/2).

    regular_tail describes how (1 - h) dies: 'exponential' or 'polynomial';
    f_tail_power is the decay power of f_X itself when polynomial (used to
    accelerate tail quadrature).
    """

    name: str
    d: float
    c: float
    h: Callable[[np.ndarray], np.ndarray]
    h_derivative_at_zero: float
    regular_tail: str = "exponential"
    f_tail_power: float | None = None

    def __post_init__(self):
        if not 0.0 < self.d < 0.5:
            raise ValueError("memory parameter d must lie in (0, 1/2)")
        if self.c <= 0:
            raise ValueError("level constant c must be positive")
        if self.regular_tail not in ("exponential", "polynomial"):
            raise ValueError("regular_tail must be 'exponential' or 'polynomial'")

    def f_x(self, lam):
        """Spectral density; even in lam, unbounded at 0."""
        lam = np.asarray(lam, dtype=float)
        if np.any(lam == 0.0):
            raise ValueError("f_x is unbounded at lam = 0")
        a = np.abs(lam)
        return self.c * a ** (-2.0 * self.d) * (1.0 - self.h(a))

    def _cosine_integrand(self, x: float) -> Integrand:
        if x == 0.0:
            return Integrand(
                evaluator=self.f_x,
                singularity_exponent=2.0 * self.d,
                tail_decay_hint="exponential" if self.regular_tail == "exponential" else "polynomial",
                tail_power=self.f_tail_power,
            )
        return Integrand(
            evaluator=lambda lam: np.cos(x * lam) * self.f_x(lam),
            singularity_exponent=2.0 * self.d,
            tail_decay_hint=("exponential" if self.regular_tail == "exponential"
                             else "oscillatory-polynomial"),
            oscillation_period=2.0 * math.pi / x,
            tail_power=self.f_tail_power,
        )

    def sigma_x(self, x, rel_tol: float = 1e-9, abs_tol: float = 1e-12):
        """Autocovariance 2 * integral_0^inf cos(x lam) f_X(lam) dlam."""
        if np.ndim(x) > 0:
            return np.array([self.sigma_x(float(xi), rel_tol, abs_tol) for xi in np.asarray(x).ravel()]).reshape(np.shape(x))
        x = float(x)
        if x < 0:
            raise ValueError("lag must be >= 0")
        r = integrate_semiaxis(self._cosine_integrand(x), rel_tol, abs_tol)
        return 2.0 * r.value

    def variance(self, rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> float:
        return self.sigma_x(0.0, rel_tol, abs_tol)

    def covariance_decomposition(self, rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> CovarianceDecomposition:
        """Leading tail constant and the uniform bound on x * remainder."""
        lead = 2.0 * self.c * covariance_tail_constant(self.d)
        bound_integrand = Integrand(
            evaluator=lambda lam: lam ** (-2.0 * self.d - 1.0) * self.h(lam),
            singularity_exponent=2.0 * self.d,
            tail_decay_hint="polynomial",
            tail_power=1.0 + 2.0 * self.d,
        )
        r = integrate_semiaxis(bound_integrand, rel_tol, abs_tol)
        return CovarianceDecomposition(
            leading_constant=lead,
            remainder_bound=2.0 * self.c * 4.0 * self.d * r.value,
        )

    def key(self) -> tuple:
        return (self.name, float(self.d), float(self.c))


def _h_exponential(lam):
    return -np.expm1(-np.asarray(lam, dtype=float))


def _h_rational(lam):
    lam = np.asarray(lam, dtype=float)
    return lam / (1.0 + lam)


def exponential_model(d: float, c: float = 0.5) -> SpectralModel:
    """Regular part 1 - h = exp(-lam), so f_X(lam) = c lam^(-2d) e^(-lam)."""
    return SpectralModel(name="exponential", d=d, c=c, h=_h_exponential,
                         h_derivative_at_zero=1.0, regular_tail="exponential")


def rational_model(d: float, c: float = 1.0) -> SpectralModel:
    """Regular part 1 - h = 1/(1 + lam), so f_X(lam) = c lam^(-2d) / (1 + lam)."""
    return SpectralModel(name="rational", d=d, c=c, h=_h_rational,
                         h_derivative_at_zero=1.0, regular_tail="polynomial",
                         f_tail_power=1.0 + 2.0 * d)


def model_from_config(name: str, d: float, c: float | None = None) -> SpectralModel:
    if name not in MODEL_NAMES:
        raise ValueError(f"unknown model {name!r}; registered models: {', '.join(MODEL_NAMES)}")
    if name == "exponential":
        return exponential_model(d, 0.5 if c is None else c)
    return rational_model(d, 1.0 if c is None else c)


# ---------------------------------------------------------------------------
# Fast vectorized sigma_X: cubic interpolation on log-spaced quadrature values
# ---------------------------------------------------------------------------

def _hermite_coeffs(v, du):
    """Per-interval cubic coefficients (Horner order) from Catmull-Rom tangents."""
    m = np.empty_like(v)
    m[1:-1] = (v[2:] - v[:-2]) / 2.0
    m[0] = v[1] - v[0]
    m[-1] = v[-1] - v[-2]
    v0, v1 = v[:-1], v[1:]
    m0, m1 = m[:-1], m[1:]
    coef = np.empty((v.size - 1, 4))
    coef[:, 0] = v0
    coef[:, 1] = m0
    coef[:, 2] = -3.0 * v0 - 2.0 * m0 + 3.0 * v1 - m1
    coef[:, 3] = 2.0 * v0 + m0 - 2.0 * v1 + m1
    return np.ascontiguousarray(coef)


class CovarianceTable:
    """sigma_X lookup table, exact at quadrature knots, cubic in log-lag.

    Two uniform-in-log pieces: a fine one over [x_lo, ~x_mid] where the
    covariance still has structure, and a coarse one beyond, where it is a
    near-pure power (so log-spacing makes it almost exactly cubic).  Below
    x_lo the table blends to sigma_X(0) with the x^(2d) contact behaviour of
    long-memory covariances.  The piece switch and both ends stay away from
    one-sided-tangent intervals.
    """

    X_LO = 1e-9
    X_MID = 64.0

    def __init__(self, model: SpectralModel, x_max: float,
                 du_fine: float = 0.004, du_coarse: float = 0.02,
                 rel_tol: float = 1e-9, abs_tol: float = 1e-12):
        if x_max <= self.X_MID:
            x_max = 2.0 * self.X_MID
        self.model = model
        self.x_max = float(x_max)
        self.sigma0 = model.variance(rel_tol, abs_tol)
        u_lo, u_mid = math.log(self.X_LO), math.log(self.X_MID)
        na = int(math.ceil((u_mid - u_lo) / du_fine)) + 2
        ua = u_lo + du_fine * np.arange(na)
        u0b = ua[-1] - 3.0 * du_coarse
        nb = int(math.ceil((math.log(x_max) + 2 * du_coarse - u0b) / du_coarse)) + 3
        ub = u0b + du_coarse * np.arange(nb)
        va = model.sigma_x(np.exp(ua), rel_tol, abs_tol)
        vb = model.sigma_x(np.exp(ub), rel_tol, abs_tol)
        self._u0a, self._dua = float(ua[0]), du_fine
        self._u0b, self._dub = float(u0b), du_coarse
        self._ca = _hermite_coeffs(np.asarray(va, dtype=float), du_fine)
        self._cb = _hermite_coeffs(np.asarray(vb, dtype=float), du_coarse)
        self._seam = float(u0b + 2.0 * du_coarse)   # switch where both pieces use central tangents
        self._umax = float(ub[-2])
        self._v_lo = float(va[0])

    def pack(self):
        """Plain-array view consumed by the jitted kernels."""
        return (self.sigma0, self.X_LO, 2.0 * self.model.d, self._v_lo,
                self._u0a, 1.0 / self._dua, self._ca,
                self._u0b, 1.0 / self._dub, self._cb,
                self._seam, self._umax)

    def _piece_eval(self, u, u0, inv_du, coef):
        pos = (u - u0) * inv_du
        idx = np.clip(pos.astype(np.int64), 0, coef.shape[0] - 1)
        t = pos - idx
        c = coef[idx]
        return c[:, 0] + t * (c[:, 1] + t * (c[:, 2] + t * c[:, 3]))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        scalar = x.ndim == 0
        shape = x.shape
        x = np.atleast_1d(x).ravel()
        out = np.empty_like(x)
        tiny = x < self.X_LO
        if tiny.any():
            # sigma0 - sigma(x) ~ C x^(2d) at the origin
            out[tiny] = self.sigma0 - (self.sigma0 - self._v_lo) * (x[tiny] / self.X_LO) ** (2 * self.model.d)
        big = ~tiny
        if big.any():
            u = np.log(x[big])
            if u.max() > self._umax + 1e-12:
                raise ValueError(f"lag {math.exp(u.max()):.3g} beyond table range {self.x_max:.3g}; "
                                 "rebuild the table with a larger x_max")
            fine = u < self._seam
            res = np.empty_like(u)
            if fine.any():
                res[fine] = self._piece_eval(u[fine], self._u0a, 1.0 / self._dua, self._ca)
            if (~fine).any():
                res[~fine] = self._piece_eval(u[~fine], self._u0b, 1.0 / self._dub, self._cb)
            out[big] = res
        out = out.reshape(shape)
        return float(out) if scalar else out


_TABLE_CACHE: dict[tuple, CovarianceTable] = {}


def covariance_table(model: SpectralModel, x_max: float) -> CovarianceTable:
    """Cached table; x_max is bucketed upward so nearby requests share one."""
    bucket = 2.0 ** math.ceil(math.log2(max(x_max, CovarianceTable.X_MID)))
    key = model.key() + (bucket,)
    tab = _TABLE_CACHE.get(key)
    if tab is None:
        tab = CovarianceTable(model, bucket)
        _TABLE_CACHE[key] = tab
    return tab


# ---------------------------------------------------------------------------
# Monte Carlo variance of sigma_X at Poisson arrival times
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class VarianceEstimate:
    value: float
    standard_error: float
    reps: int


def var_sigma_x_at_poisson_times(model: SpectralModel, r: int, reps: int,
                                 seed: int, rate: float = 1.0) -> VarianceEstimate:
    """Monte Carlo Var(sigma_X(T_r)) with T_r a Gamma(r, 1/rate) arrival time."""
    if r < 3:
        raise ValueError("r must be >= 3 (inverse-square moments of T_r must exist)")
    if reps < 10_000:
        raise ValueError("reps must be >= 10000")
    rng = derive_rng(seed, "var-sigma-poisson", r)
    t = rng.gamma(float(r), 1.0 / rate, reps)
    table = covariance_table(model, float(t.max()) * 1.05)
    v = table(t)
    m = v.mean()
    dev = v - m
    m2 = float(np.mean(dev ** 2))
    m4 = float(np.mean(dev ** 4))
    if m2 <= 0:
        raise ValueError("variance estimate is not positive; increase reps")
    se = math.sqrt(max(m4 - m2 * m2, 0.0) / reps)
    return VarianceEstimate(value=m2, standard_error=se, reps=reps)
