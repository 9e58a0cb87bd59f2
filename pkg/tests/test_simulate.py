import math

import numpy as np
import pytest

from renewalspec.sampled_spectrum import SampledSpectrum
from renewalspec.sampling import TimeGrid, deterministic_scheme, sample_grid
from renewalspec.simulate import (conditional_covariance, factor_covariance,
                                  simulate_batch, simulate_mean_statistic)


def test_covariance_single_point(exp_model, poisson):
    grid = sample_grid(poisson, 1, seed=1)
    s = conditional_covariance(exp_model, grid)
    assert s.shape == (1, 1)
    assert s[0, 0] == pytest.approx(exp_model.variance(), rel=1e-9)


def test_covariance_regular_grid_toeplitz(exp_model):
    grid = sample_grid(deterministic_scheme(1.0), 3, seed=0)
    s = conditional_covariance(exp_model, grid)
    assert np.allclose(s, s.T, atol=0)
    expect = [exp_model.sigma_x(float(k)) for k in range(3)]
    for i in range(3):
        for j in range(3):
            assert s[i, j] == pytest.approx(expect[abs(i - j)], abs=1e-8 * expect[0])


def test_covariance_matches_direct_loop(exp_model, poisson):
    grid = sample_grid(poisson, 10, seed=5)
    s = conditional_covariance(exp_model, grid)
    t = grid.times
    for i in range(10):
        for j in range(10):
            direct = exp_model.sigma_x(abs(float(t[i] - t[j])))
            assert s[i, j] == pytest.approx(direct, abs=1e-8 * s[0, 0])


def test_factorization_residual(exp_model):
    grid = sample_grid(deterministic_scheme(0.8), 40, seed=0)
    s = conditional_covariance(exp_model, grid)
    f, jitter = factor_covariance(s, exp_model.variance())
    assert jitter == 0.0
    assert np.abs(f @ f.T - s).max() <= 1e-8 * exp_model.variance()


def test_batch_determinism(exp_model, poisson):
    a = simulate_batch(exp_model, poisson, 32, 8, seed=9)
    b = simulate_batch(exp_model, poisson, 32, 8, seed=9)
    c = simulate_batch(exp_model, poisson, 32, 8, seed=9, workers=2)
    assert np.array_equal(a.paths, b.paths)
    assert np.array_equal(a.paths, c.paths)
    d = simulate_batch(exp_model, poisson, 32, 8, seed=10)
    assert not np.array_equal(a.paths, d.paths)


def test_batch_jitter_cap_and_ncap(exp_model, poisson):
    b = simulate_batch(exp_model, poisson, 64, 50, seed=2)
    assert b.regularization_used <= 1e-8 * exp_model.variance()
    with pytest.raises(ValueError):
        simulate_batch(exp_model, poisson, 9000, 1, seed=1)


def test_shared_grid_matches_conditional_covariance(exp_model, poisson):
    reps = 10_000
    batch = simulate_batch(exp_model, poisson, 24, reps, seed=4, shared_grid=True)
    s = conditional_covariance(exp_model, batch.grid)
    emp = (batch.paths.T @ batch.paths) / reps
    se = np.sqrt((np.outer(np.diag(s), np.diag(s)) + s ** 2) / reps)
    assert np.all(np.abs(emp - s) <= 5 * se)


def test_fresh_grid_marginal_variance(exp_model, poisson):
    reps = 10_000
    batch = simulate_batch(exp_model, poisson, 16, reps, seed=6)
    s0 = exp_model.variance()
    var = batch.paths.var(axis=0, ddof=1)
    se = s0 * math.sqrt(2.0 / (reps - 1))
    assert np.all(np.abs(var - s0) <= 5 * se)


def test_fresh_grid_lag_autocovariance(exp_model, poisson):
    reps = 20_000
    spectrum = SampledSpectrum(exp_model, poisson)
    batch = simulate_batch(exp_model, poisson, 8, reps, seed=7)
    for j in (1, 2, 5):
        prod = batch.paths[:, 0] * batch.paths[:, j]
        se = prod.std(ddof=1) / math.sqrt(reps)
        assert abs(prod.mean() - spectrum.sigma_y(j)) <= 5 * se


def test_mean_statistic_centred(exp_model, poisson):
    reps = 3000
    stats = simulate_mean_statistic(exp_model, poisson, 256, reps, seed=8)
    se = stats.std(ddof=1) / math.sqrt(reps)
    assert abs(stats.mean()) <= 4 * se


def test_mean_statistic_variance_stabilizes(exp_model, poisson):
    reps = 1500
    variances = {}
    for i, n in enumerate((512, 1024, 2048)):
        s = simulate_mean_statistic(exp_model, poisson, n, reps, seed=20 + i)
        variances[n] = s.var(ddof=1)
    vals = np.array(list(variances.values()))
    assert (vals.max() - vals.min()) / vals.mean() < 0.25


def test_mean_statistic_normality(exp_model, poisson):
    stats = simulate_mean_statistic(exp_model, poisson, 2048, 2000, seed=30)
    z = (stats - stats.mean()) / stats.std(ddof=0)
    skew = float(np.mean(z ** 3))
    assert abs(skew) <= 0.2
