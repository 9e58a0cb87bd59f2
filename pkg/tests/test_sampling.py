import numpy as np
import pytest
from scipy.stats import ks_2samp

from renewalspec.montecarlo import derive_rng
from renewalspec.sampling import (SamplingScheme, TimeGrid, deterministic_scheme,
                                  exponential_scheme, gamma_scheme, sample_grid,
                                  scheme_from_config)


def test_s_hat_at_zero():
    assert exponential_scheme(1.0).s_hat(0.0) == pytest.approx(1.0)
    assert gamma_scheme(2.0, 3.0).s_hat(0.0) == pytest.approx(1.0)
    assert deterministic_scheme(1.0).s_hat(0.0) == pytest.approx(1.0)


def test_s_hat_poisson_closed_form():
    sch = exponential_scheme(1.0)
    assert sch.s_hat(1.0) == pytest.approx(0.5 + 0.5j, abs=1e-15)


def test_s_hat_modulus_squared():
    sch = exponential_scheme(1.0)
    assert abs(sch.s_hat(2.0)) ** 2 == pytest.approx(0.2, abs=1e-15)
    lam = np.linspace(-9, 9, 101)
    assert np.allclose(np.abs(sch.s_hat(lam)) ** 2, sch.s_hat_abs2(lam), atol=1e-14)


def test_s_hat_bounded_and_strict_for_nonlattice():
    lam = np.concatenate([np.linspace(-20, 20, 401), [1e-4, 1e4]])
    for sch in (exponential_scheme(0.7), gamma_scheme(1.7, 2.0)):
        mod = np.abs(sch.s_hat(lam))
        assert np.all(mod <= 1.0 + 1e-12)
        nz = lam != 0
        assert np.all(mod[nz] < 1.0)
        assert not sch.is_lattice
    det = deterministic_scheme(2.0)
    assert det.is_lattice
    # lattice law touches modulus 1 away from zero
    assert abs(det.s_hat(np.pi)) == pytest.approx(1.0)


def test_deterministic_grid():
    grid = sample_grid(deterministic_scheme(1.0), 5, seed=0)
    assert np.allclose(grid.times, [1, 2, 3, 4, 5])


def test_law_of_large_numbers():
    grid = sample_grid(exponential_scheme(1.0), 10_000, seed=21)
    incr = np.diff(np.concatenate([[0.0], grid.times]))
    assert abs(incr.mean() - 1.0) <= 4.0 / np.sqrt(10_000)


def test_seed_reproducibility():
    sch = gamma_scheme(2.0, 1.0)
    g1 = sample_grid(sch, 100, seed=5)
    g2 = sample_grid(sch, 100, seed=5)
    g3 = sample_grid(sch, 100, seed=6)
    assert np.array_equal(g1.times, g2.times)
    assert not np.array_equal(g1.times, g3.times)


@pytest.mark.parametrize("sch", [exponential_scheme(1.0), gamma_scheme(2.0, 2.0)])
def test_empirical_characteristic_function(sch):
    rng = derive_rng(3, "ecf-test")
    delta = sch.sample_intervals(100_000, rng)
    for lam in (0.5, 1.0, 2.0):
        emp = np.exp(1j * lam * delta)
        target = sch.s_hat(lam)
        for part, val in (("re", np.real), ("im", np.imag)):
            se = val(emp).std(ddof=1) / np.sqrt(delta.size)
            assert abs(val(emp).mean() - val(target)) <= 5 * se


def test_increment_halves_same_distribution():
    grid = sample_grid(exponential_scheme(1.0), 10_000, seed=13)
    incr = np.diff(np.concatenate([[0.0], grid.times]))
    stat = ks_2samp(incr[:5000], incr[5000:])
    assert stat.pvalue > 0.001


def test_grid_validation():
    sch = exponential_scheme(1.0)
    with pytest.raises(ValueError):
        sample_grid(sch, 0, seed=1)
    with pytest.raises(ValueError):
        TimeGrid(times=np.array([1.0, 1.0]), seed=0, scheme=sch)
    with pytest.raises(ValueError):
        TimeGrid(times=np.array([-1.0, 2.0]), seed=0, scheme=sch)


def test_scheme_config_registry():
    sch = scheme_from_config("gamma", {"shape": 2.0, "rate": 4.0})
    assert sch.mean_interval == pytest.approx(0.5)
    with pytest.raises(ValueError) as exc:
        scheme_from_config("weibull", {})
    assert "exponential" in str(exc.value)
    with pytest.raises(ValueError):
        SamplingScheme("exponential", rate=-1.0)
