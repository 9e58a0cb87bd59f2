"""Second-order theory of the renewal-sampled process Y_n = X_{T_n}.

The sampled autocovariance is sigma_Y(j) = E sigma_X(T_j), computable as the
real part of the transfer integral of s_hat(lam)^j against f_X.  The sampled
process keeps a spectral density on [-pi, pi]:

    f_Y(x) = (1/2pi) integral (1 - |s_hat|^2) / |1 - e^{ix} s_hat|^2 f_X dlam

For Poisson sampling f_Y factorizes as x^(-2d) f_Y*(x) with f_Y* positive and
continuous, and the normalized periodogram ordinates converge to weighted
chi-square laws whose weights are the frequency constants computed in
``limit_constants``.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .quadrature import Integrand, integrate_semiaxis, integrate_symmetric
from .sampling import SamplingScheme
from .spectral_models import SpectralModel

__all__ = ["SampledSpectrum", "LimitConstants", "limit_constants"]


def _sinc_ratio(u):
    """sin(u)/u, stable through u = 0."""
    return np.sinc(np.asarray(u, dtype=float) / np.pi)


class SampledSpectrum:
    """Cached second-order quantities of Y for one (model, scheme) pair."""

    def __init__(self, model: SpectralModel, scheme: SamplingScheme,
                 rel_tol: float = 1e-9, abs_tol: float = 1e-12):
        self.model = model
        self.scheme = scheme
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol
        self._sigma_cache: dict[int, float] = {}
        self._f_y_cache: dict[float, float] = {}
        self._lock = threading.Lock()

    # -- autocovariance ----------------------------------------------------

    def _transfer_tail(self) -> tuple[str, float | None]:
        if self.model.regular_tail == "exponential":
            return "exponential", None
        return "polynomial", self.model.f_tail_power

    def sigma_y(self, j: int) -> float:
        """Cov(Y_1, Y_{1+j}) = real part of integral s_hat^j f_X."""
        if j < 0:
            raise ValueError("lag index j must be >= 0")
        j = int(j)
        with self._lock:
            if j in self._sigma_cache:
                return self._sigma_cache[j]
        if j == 0:
            val = self.model.variance(self.rel_tol, self.abs_tol)
        else:
            val = self._sigma_y_quadrature(j)
        with self._lock:
            self._sigma_cache[j] = val
        return val

    def _sigma_y_quadrature(self, j: int) -> float:
        scheme, model = self.scheme, self.model
        hint, power = self._transfer_tail()

        def real_part(lam):
            return np.real(scheme.s_hat(lam) ** j) * model.f_x(lam)

        period = None
        if scheme.is_lattice:
            period = 2.0 * math.pi / (j * scheme.step)
            hint = "exponential" if hint == "exponential" else "oscillatory-polynomial"
        real_int = Integrand(real_part, singularity_exponent=2.0 * model.d,
                             tail_decay_hint=hint, oscillation_period=period,
                             tail_power=power)
        res = integrate_symmetric(real_int, self.rel_tol, self.abs_tol, assume_even=True)

        # oddness of the imaginary part, checked pointwise-and-integrated;
        # catches a non-conjugate-symmetric characteristic function
        def imag_folded(lam):
            z = scheme.s_hat(lam) ** j * model.f_x(lam)
            zm = scheme.s_hat(-lam) ** j * model.f_x(-lam)
            return np.imag(z) + np.imag(zm)

        imag_int = Integrand(imag_folded, singularity_exponent=2.0 * model.d,
                             tail_decay_hint="exponential")
        imag = integrate_semiaxis(imag_int, self.rel_tol, self.abs_tol)
        if abs(imag.value) > 10.0 * self.abs_tol:
            raise RuntimeError(
                f"imaginary part of the transfer integral is {imag.value!r} at j={j}; "
                "the characteristic function is not conjugate-symmetric")
        return res.value

    # -- spectral density ---------------------------------------------------

    def f_y(self, x: float) -> float:
        """Spectral density of Y at x in [-pi, pi] excluding 0 (even in x)."""
        if self.scheme.is_lattice:
            raise ValueError("f_Y is not defined through the transfer integral for "
                             "lattice sampling (|s_hat| = 1 away from 0)")
        ax = abs(float(x))
        if not 0.0 < ax <= math.pi + 1e-12:
            raise ValueError("frequency must lie in [-pi, pi] and be nonzero")
        with self._lock:
            if ax in self._f_y_cache:
                return self._f_y_cache[ax]
        if self.scheme.kind == "exponential":
            val = self._f_y_poisson(ax)
        else:
            val = self._f_y_generic(ax)
        with self._lock:
            self._f_y_cache[ax] = val
        return val

    def _f_y_poisson(self, x: float) -> float:
        # real decomposition of the transfer integral: no complex arithmetic
        # and an explicitly positive denominator on each half-line
        theta = self.scheme.rate
        w = math.sin(x)
        v = 2.0 * math.sin(x / 2.0) ** 2    # 1 - cos(x), stable for tiny x
        model = self.model
        hint, power = self._transfer_tail()

        def branch(sign):
            def g(lam):
                u = lam / theta
                return u * u / ((u + sign * w) ** 2 + v * v) * model.f_x(lam)
            return g

        s = theta * w
        peak = [s / 2, s, 2 * s, 4 * s]
        widths = [s + k * theta * v for k in (-8.0, -2.0, 2.0, 8.0)]
        splits = [p for p in peak + widths if p > 0]
        total = 0.0
        for sign in (-1.0, 1.0):
            g = Integrand(branch(sign), singularity_exponent=0.0,
                          tail_decay_hint=hint, tail_power=power)
            total += integrate_semiaxis(g, self.rel_tol, self.abs_tol,
                                        split_points=splits if sign < 0 else [s]).value
        return total / (2.0 * math.pi)

    def _f_y_generic(self, x: float) -> float:
        scheme, model = self.scheme, self.model
        hint, power = self._transfer_tail()
        eix = complex(math.cos(x), math.sin(x))

        def g(lam):
            sh = scheme.s_hat(lam)
            return (1.0 - scheme.s_hat_abs2(lam)) / np.abs(1.0 - eix * sh) ** 2 * model.f_x(lam)

        integrand = Integrand(g, singularity_exponent=0.0,
                              tail_decay_hint=hint, tail_power=power)
        res = integrate_symmetric(integrand, self.rel_tol, self.abs_tol)
        return res.value / (2.0 * math.pi)

    def f_y_star(self, x: float) -> float:
        """Short-memory factor x^(2d) f_Y(x); Poisson sampling only."""
        if self.scheme.kind != "exponential":
            raise ValueError("f_Y* factorization is established for Poisson sampling only")
        ax = abs(float(x))
        return ax ** (2.0 * self.model.d) * self.f_y(ax)


# ---------------------------------------------------------------------------
# Limit constants of the normalized periodogram
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LimitConstants:
    """Second moments of the limiting cosine/sine pair at Fourier index j
    (and the cross-frequency moments against index k when given)."""

    j: int
    L_j: float
    R_j: float
    var_z1: float
    var_z2: float
    k: int | None = None
    L_jk: float | None = None
    R_jk: float | None = None
    cov_z1: float | None = None
    cov_z2: float | None = None


def _constants_integral(evaluator, d, splits, rel_tol, abs_tol):
    g = Integrand(evaluator, singularity_exponent=2.0 * d,
                  tail_decay_hint="oscillatory-polynomial",
                  oscillation_period=2.0 * math.pi,
                  tail_power=2.0 + 2.0 * d)
    return integrate_symmetric(g, rel_tol, abs_tol, split_points=splits).value


def limit_constants(d: float, j: int, k: int | None = None,
                    rel_tol: float = 1e-9, abs_tol: float = 1e-12) -> LimitConstants:
    """L_j, R_j (and L_jk, R_jk) plus the implied variance/covariance split.

    d = 0 is allowed as a short-memory boundary diagnostic.  The integrands
    are rewritten through sin(u)/u factors, which removes the 0/0 at
    lam = +-2*pi*j exactly (the sine zero cancels the pole).
    """
    if not 0.0 <= d < 0.5:
        raise ValueError("d must lie in [0, 1/2)")
    if j < 1 or int(j) != j:
        raise ValueError("frequency index j must be a positive integer")
    if k is not None and (k < 1 or int(k) != k or k == j):
        raise ValueError("second index k must be a positive integer different from j")
    j = int(j)
    pj = 2.0 * math.pi * j

    def l_j(lam):
        return 0.25 * _sinc_ratio((lam - pj) / 2.0) ** 2 * np.abs(lam / pj) ** (-2.0 * d)

    def r_j(lam):
        return (-0.25 * _sinc_ratio((lam - pj) / 2.0) * _sinc_ratio((lam + pj) / 2.0)
                * np.abs(lam / pj) ** (-2.0 * d))

    L = (2.0 / math.pi) * _constants_integral(l_j, d, [-pj, pj], rel_tol, abs_tol)
    R = (1.0 / math.pi) * _constants_integral(r_j, d, [-pj, pj], rel_tol, abs_tol)
    var_z1 = 0.5 - R / L
    var_z2 = 1.0 - var_z1

    if k is None:
        return LimitConstants(j=j, L_j=L, R_j=R, var_z1=var_z1, var_z2=var_z2)

    k = int(k)
    pk = 2.0 * math.pi * k
    sign = -1.0 if (j + k) % 2 else 1.0
    two_pi = 2.0 * math.pi

    def l_jk(lam):
        return (sign * 0.25 * _sinc_ratio((lam - pk) / 2.0) * _sinc_ratio((lam - pj) / 2.0)
                * np.abs(lam / two_pi) ** (-2.0 * d))

    def r_jk(lam):
        return (-sign * 0.25 * _sinc_ratio((lam + pk) / 2.0) * _sinc_ratio((lam - pj) / 2.0)
                * np.abs(lam / two_pi) ** (-2.0 * d))

    pref = (j * k) ** d / math.pi
    Ljk = pref * _constants_integral(l_jk, d, [-pk, -pj, pj, pk], rel_tol, abs_tol)
    Rjk = pref * _constants_integral(r_jk, d, [-pk, -pj, pj, pk], rel_tol, abs_tol)
    denom = math.sqrt(limit_constants(d, k, rel_tol=rel_tol, abs_tol=abs_tol).L_j * L)
    return LimitConstants(j=j, L_j=L, R_j=R, var_z1=var_z1, var_z2=var_z2,
                          k=k, L_jk=Ljk, R_jk=Rjk,
                          cov_z1=(Ljk - Rjk) / denom, cov_z2=(Ljk + Rjk) / denom)
