"""Deterministic seed derivation.

Every run of the audit matrix draws its random stream from a seed that
is a pure function of (master seed, method, function, variant, run
index), so results are independent of execution order and worker count.
The mixing function absorbs each component with a splitmix64 step.
"""

from __future__ import annotations

import numpy as np

_U64 = (1 << 64) - 1


def _splitmix64(z: int) -> int:
    z = (z + 0x9E3779B97F4A7C15) & _U64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _U64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _U64
    return (z ^ (z >> 31)) & _U64


def mix64(*values: int) -> int:
    """Mix any number of integers into one well-scrambled 64-bit seed."""
    acc = 0x9E3779B97F4A7C15
    for v in values:
        acc = _splitmix64(acc ^ (int(v) & _U64))
    return acc


def rng_from(*values: int) -> np.random.Generator:
    """A fresh PCG64 generator seeded from the mixed values."""
    return np.random.default_rng(mix64(*values))
