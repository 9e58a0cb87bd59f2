"""Deterministic seed derivation and replicate execution.

Every random draw in the package flows from a root seed through a
counter-based Philox generator keyed by (root seed, stream name, replicate
index).  Replicate results therefore do not depend on how work is split
across workers: parallel and serial runs produce bit-identical output, and
a replicate can be re-run in isolation.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable

import numpy as np

__all__ = ["stream_key", "derive_rng", "run_replicates"]


def stream_key(stream: str) -> int:
    """Stable 64-bit key for a stream name (blake2s, fixed across runs)."""
    return int.from_bytes(hashlib.blake2s(stream.encode()).digest()[:8], "big")


def derive_rng(seed: int, stream: str, index: int = 0) -> np.random.Generator:
    """Independent generator for (seed, stream, index)."""
    ss = np.random.SeedSequence(entropy=(int(seed), stream_key(stream), int(index)))
    return np.random.Generator(np.random.Philox(ss))


def _run_span(task, payload, seed, stream, lo, hi):
    try:
        from threadpoolctl import threadpool_limits
        ctx = threadpool_limits(limits=1)
    except Exception:  # pragma: no cover - threadpoolctl is a hard dep
        ctx = None
    try:
        out = [np.asarray(task(payload, derive_rng(seed, stream, i), i), dtype=float)
               for i in range(lo, hi)]
    finally:
        if ctx is not None:
            ctx.unregister()
    return np.stack(out)


def run_replicates(task: Callable, reps: int, *, seed: int, stream: str,
                   payload=None, workers: int = 1) -> np.ndarray:
    """Run ``task(payload, rng, index)`` for index 0..reps-1.

    Returns the stacked per-replicate arrays in index order.  ``task`` must
    be a module-level callable (picklable) when workers > 1.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    workers = max(1, int(workers))
    if workers == 1:
        return np.stack([
            np.asarray(task(payload, derive_rng(seed, stream, i), i), dtype=float)
            for i in range(reps)
        ])
    n_chunks = min(reps, workers * 4)
    bounds = np.linspace(0, reps, n_chunks + 1).astype(int)
    spans = [(lo, hi) for lo, hi in zip(bounds[:-1], bounds[1:]) if hi > lo]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(
            _run_span,
            *zip(*[(task, payload, seed, stream, lo, hi) for lo, hi in spans]),
        ))
    return np.concatenate(parts)


def default_workers() -> int:
    """Worker count used when a config does not pin one."""
    env = os.environ.get("RENEWALSPEC_WORKERS")
    if env:
        return max(1, int(env))
    return max(1, (os.cpu_count() or 1))
