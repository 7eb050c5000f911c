"""Deterministic seed splitting.

Per-sample seeds are ``mix_seed(seed, index)``, built from the SplitMix64
finalizer. Anything derived from a child seed depends only on
``(seed, index)``, never on evaluation order or thread count.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def splitmix64(x: int) -> int:
    """One SplitMix64 step on a 64-bit integer."""
    z = (x + _GOLDEN) & _MASK
    z = ((z ^ (z >> 30)) * _M1) & _MASK
    z = ((z ^ (z >> 27)) * _M2) & _MASK
    return z ^ (z >> 31)


def mix_seed(seed: int, index: int) -> int:
    """Child seed for sample ``index``: ``splitmix64(seed ^ splitmix64(index))``."""
    return splitmix64((seed & _MASK) ^ splitmix64(index & _MASK))


def splitmix64_array(x: np.ndarray) -> np.ndarray:
    z = np.asarray(x, dtype=np.uint64) + np.uint64(_GOLDEN)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
    return z ^ (z >> np.uint64(31))


def mix_seed_array(seed: int, index: np.ndarray) -> np.ndarray:
    """Vectorized :func:`mix_seed`; bit-identical to the scalar version."""
    return splitmix64_array(np.uint64(seed & _MASK) ^ splitmix64_array(index))


def unit_uniforms(child_seeds: np.ndarray, stream: int = 0) -> np.ndarray:
    """Uniform doubles in [0, 1) from child seeds, one per seed.

    ``stream`` selects an independent variate from the same child seed.
    """
    bits = splitmix64_array(np.asarray(child_seeds, dtype=np.uint64) ^ np.uint64(splitmix64(stream)))
    return (bits >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def child_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(mix_seed(seed, index))


def as_generator(rng_seed) -> np.random.Generator:
    """Accept ``None``, an int seed or an existing Generator."""
    if isinstance(rng_seed, np.random.Generator):
        return rng_seed
    return np.random.default_rng(rng_seed)
