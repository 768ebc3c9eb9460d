"""Seeded splitmix64 sequence for reproducible initial conditions.

Every experiment is reproducible from its 64-bit seed alone, independent of
platform and of any global RNG state.
"""
from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15


def splitmix64(seed: int, n: int) -> np.ndarray:
    """First n outputs of the splitmix64 stream for the given seed (uint64)."""
    out = np.empty(n, dtype=np.uint64)
    state = int(seed) & _MASK
    for i in range(n):
        state = (state + _GAMMA) & _MASK
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
        out[i] = z ^ (z >> 31)
    return out


def uniform(seed: int, n: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
    """n uniform floats in [low, high) from the splitmix64 stream."""
    u = splitmix64(seed, n).astype(float) / 2.0**64
    return low + (high - low) * u
