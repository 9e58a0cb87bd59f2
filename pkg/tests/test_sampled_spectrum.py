import math

import numpy as np
import pytest
from scipy.integrate import quad

from renewalspec.montecarlo import derive_rng
from renewalspec.sampled_spectrum import SampledSpectrum, limit_constants
from renewalspec.sampling import deterministic_scheme, exponential_scheme, gamma_scheme
from renewalspec.spectral_models import covariance_table, exponential_model


@pytest.fixture(scope="module")
def spectrum(exp_model, poisson):
    return SampledSpectrum(exp_model, poisson)


def test_sigma_y_zero_lag(spectrum, exp_model):
    assert spectrum.sigma_y(0) == exp_model.variance()


@pytest.mark.parametrize("j,reps", [(1, 1_000_000), (5, 1_000_000)])
def test_sigma_y_against_monte_carlo(spectrum, exp_model, j, reps):
    rng = derive_rng(17, f"sigma-mc-{j}")
    t = rng.gamma(float(j), 1.0, reps)
    table = covariance_table(exp_model, float(t.max()) * 1.05)
    vals = table(t)
    se = vals.std(ddof=1) / math.sqrt(reps)
    assert abs(spectrum.sigma_y(j) - vals.mean()) <= 4 * se


def test_sigma_y_cache_and_bound(spectrum):
    s0 = spectrum.sigma_y(0)
    for j in range(1, 12):
        assert abs(spectrum.sigma_y(j)) <= s0


def test_sigma_y_deterministic_equals_shifted_sigma_x(exp_model):
    sp = SampledSpectrum(exp_model, deterministic_scheme(0.7))
    assert sp.sigma_y(4) == pytest.approx(exp_model.sigma_x(2.8), rel=1e-9)


def test_sigma_y_toeplitz_psd(spectrum):
    from scipy.linalg import toeplitz
    vals = np.array([spectrum.sigma_y(j) for j in range(30)])
    w = np.linalg.eigvalsh(toeplitz(vals))
    assert w.min() >= -1e-8 * vals[0]


def test_sigma_y_memory_preservation(spectrum, exp_model):
    js = np.unique(np.round(np.exp(np.linspace(math.log(20), math.log(200), 12)))).astype(int)
    vals = np.array([spectrum.sigma_y(int(j)) for j in js])
    slope = np.polyfit(np.log(js), np.log(vals), 1)[0]
    assert abs(slope - (2 * exp_model.d - 1)) <= 0.1


def test_f_y_fourier_inversion_zero_lag(spectrum):
    total = 2 * quad(lambda x: spectrum.f_y(x), 0, np.pi, limit=300,
                     epsabs=1e-10, epsrel=1e-8, points=[1e-4, 0.1])[0]
    assert total == pytest.approx(spectrum.sigma_y(0), rel=1e-5)


@pytest.mark.parametrize("k", [1, 3, 7])
def test_f_y_fourier_coefficients(spectrum, k):
    val = 2 * quad(lambda x: math.cos(k * x) * spectrum.f_y(x), 0, np.pi,
                   limit=400, epsabs=1e-10, epsrel=1e-8, points=[1e-4, 0.1])[0]
    assert val == pytest.approx(spectrum.sigma_y(k), rel=1e-4)


def test_f_y_even_and_domain(spectrum):
    assert spectrum.f_y(-0.3) == spectrum.f_y(0.3)
    with pytest.raises(ValueError):
        spectrum.f_y(0.0)
    with pytest.raises(ValueError):
        spectrum.f_y(4.0)


def test_f_y_rejects_lattice(exp_model):
    sp = SampledSpectrum(exp_model, deterministic_scheme(1.0))
    with pytest.raises(ValueError):
        sp.f_y(0.5)


def test_f_y_generic_matches_poisson_form(exp_model):
    # the generic complex-modulus route must agree with the real decomposition
    sp = SampledSpectrum(exp_model, exponential_scheme(1.0))
    for x in (0.05, 0.9, 3.0):
        assert sp._f_y_generic(x) == pytest.approx(sp._f_y_poisson(x), rel=1e-8)


def test_f_y_star_positive_and_smooth(spectrum):
    xs = np.pi * np.arange(1, 201) / 200.0
    vals = np.array([spectrum.f_y_star(float(x)) for x in xs])
    assert np.all(vals > 0)
    assert np.all(np.isfinite(vals))
    # continuity proxy: nearest-neighbour relative jumps stay small
    rel_jump = np.abs(np.diff(vals)) / vals[:-1]
    assert rel_jump.max() < 0.05


def test_f_y_star_scope(exp_model):
    sp = SampledSpectrum(exp_model, gamma_scheme(2.0, 2.0))
    with pytest.raises(ValueError):
        sp.f_y_star(0.3)


def test_f_y_star_short_memory_limit(spectrum, exp_model):
    # f_Y*(x) -> c, with the second-order coefficient approaching
    # sigma_X(0)/(2 pi) from below at rate x^(1-2d)
    c = exp_model.c
    d = exp_model.d
    target = exp_model.variance() / (2 * math.pi)
    xs = np.array([0.1, 0.05, 0.025, 0.0125])
    stars = np.array([spectrum.f_y_star(float(x)) for x in xs])
    assert abs(stars[-1] - c) <= 0.05 * c
    coefs = (stars - c) / xs ** (2 * d)
    assert np.all(np.diff(coefs) > 0)          # approaches the limit...
    assert np.all(coefs < target)              # ...from below
    # extrapolating the x^(1-2d) correction recovers the level constant
    design = np.column_stack([np.ones_like(xs), np.sqrt(xs), xs])
    intercept = np.linalg.lstsq(design, stars, rcond=None)[0][0]
    assert intercept == pytest.approx(c, rel=0.01)


# -- limit constants ---------------------------------------------------------

def test_limit_constants_short_memory_anchor():
    lc = limit_constants(0.0, 1)
    assert abs(lc.L_j - 1.0) <= 1e-6
    assert abs(lc.R_j) <= 1e-6 * lc.L_j


def test_limit_constants_positive_and_split():
    for d in (0.1, 0.25, 0.4):
        for j in (1, 2, 3, 5, 10):
            lc = limit_constants(d, j)
            assert np.isfinite(lc.L_j) and lc.L_j > 0
            assert abs(lc.R_j) <= lc.L_j / 2
            assert lc.var_z1 >= 0 and lc.var_z2 >= 0
            assert lc.var_z1 + lc.var_z2 == 1.0


def test_limit_constants_independent_oracle():
    # direct scipy.quad of the defining integral, with an analytic bound for
    # the truncated tail added back
    d, j = 0.25, 1
    pj = 2 * math.pi * j

    def integrand(lam):
        u = (lam - pj) / 2.0
        sr = np.sinc(u / np.pi)
        return 0.25 * sr * sr * abs(lam / pj) ** (-2 * d)

    cut = 400 * pj
    total = 0.0
    for a, b in [(-cut, -pj), (-pj, 0.0), (0.0, pj), (pj, 3 * pj), (3 * pj, cut)]:
        total += quad(integrand, a, b, limit=3000, epsabs=1e-13, epsrel=1e-11)[0]
    # tail: 0.25 * sr^2 has envelope sin^2/(lam-pj)^2, mean 1/2 per period
    tail = 2 * 0.5 * pj ** (2 * d) * cut ** (-1 - 2 * d) / (1 + 2 * d)
    oracle = (2 / math.pi) * (total + tail)
    assert limit_constants(d, j).L_j == pytest.approx(oracle, rel=2e-5)


def test_limit_constants_cross_symmetry():
    a = limit_constants(0.25, 1, 3)
    b = limit_constants(0.25, 3, 1)
    assert a.L_jk == pytest.approx(b.L_jk, rel=1e-9, abs=1e-12)
    assert a.R_jk == pytest.approx(b.R_jk, rel=1e-9, abs=1e-12)


def test_limit_constants_domain():
    with pytest.raises(ValueError):
        limit_constants(0.5, 1)
    with pytest.raises(ValueError):
        limit_constants(-0.1, 1)
    with pytest.raises(ValueError):
        limit_constants(0.25, 0)
    with pytest.raises(ValueError):
        limit_constants(0.25, 2, 2)
