import numpy as np
import pytest

from renewalspec.sampling import exponential_scheme
from renewalspec.spectral_models import exponential_model, rational_model
from scipy.special import gamma as gamma_fn


@pytest.fixture(scope="session")
def exp_model():
    return exponential_model(0.25, 0.5)


@pytest.fixture(scope="session")
def rat_model():
    return rational_model(0.25, 1.0)


@pytest.fixture(scope="session")
def poisson():
    return exponential_scheme(1.0)


def sigma_exp_closed(x, c=0.5, d=0.25):
    """Closed-form autocovariance of the exponential-regular-part model:
    the cosine transform of c lam^(-2d) e^(-lam) in terms of Gamma."""
    x = np.asarray(x, dtype=float)
    s = 1.0 - 2.0 * d
    return 2.0 * c * gamma_fn(s) * (1.0 + x * x) ** (-s / 2.0) * np.cos(s * np.arctan(x))


@pytest.fixture(scope="session")
def sigma_closed():
    return sigma_exp_closed
