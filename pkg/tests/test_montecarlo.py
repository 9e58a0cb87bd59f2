import numpy as np
import pytest

from renewalspec.montecarlo import derive_rng, run_replicates, stream_key
from renewalspec.simulate import _normal_vector_replicate


def test_derive_rng_deterministic():
    a = derive_rng(5, "stream", 3).standard_normal(4)
    b = derive_rng(5, "stream", 3).standard_normal(4)
    assert np.array_equal(a, b)


def test_derive_rng_streams_differ():
    base = derive_rng(5, "stream", 3).standard_normal(4)
    assert not np.array_equal(base, derive_rng(6, "stream", 3).standard_normal(4))
    assert not np.array_equal(base, derive_rng(5, "other", 3).standard_normal(4))
    assert not np.array_equal(base, derive_rng(5, "stream", 4).standard_normal(4))


def test_stream_key_stable():
    assert stream_key("path-batch") == stream_key("path-batch")
    assert stream_key("a") != stream_key("b")


def test_run_replicates_order_and_parallel_identity():
    serial = run_replicates(_normal_vector_replicate, 9, seed=3, stream="t",
                            payload=4, workers=1)
    parallel = run_replicates(_normal_vector_replicate, 9, seed=3, stream="t",
                              payload=4, workers=2)
    assert serial.shape == (9, 4)
    assert np.array_equal(serial, parallel)


def test_run_replicates_validation():
    with pytest.raises(ValueError):
        run_replicates(_normal_vector_replicate, 0, seed=1, stream="t", payload=2)
