"""Deterministic splittable pseudo-random generator.

Every randomized routine in the library threads one of these through,
so a (seed, inputs) pair reproduces a run exactly, independent of the
platform's random module.  The core is SplitMix64: a 64-bit counter
advanced by a fixed odd constant, output through an avalanching mix.
"""

from __future__ import annotations

import numpy as np

_MASK = (1 << 64) - 1
_GAMMA = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


def _mix(z: int) -> int:
    z = (z ^ (z >> 30)) * _MIX1 & _MASK
    z = (z ^ (z >> 27)) * _MIX2 & _MASK
    return z ^ (z >> 31)


class SplitMix64:
    """Seeded 64-bit generator; `split` derives an independent stream."""

    __slots__ = ("_state",)

    def __init__(self, seed: int):
        self._state = seed & _MASK

    def next_u64(self) -> int:
        self._state = (self._state + _GAMMA) & _MASK
        return _mix(self._state)

    def split(self) -> "SplitMix64":
        return SplitMix64(self.next_u64())

    def below(self, n: int) -> int:
        """Uniform integer in [0, n), unbiased via rejection."""
        if n <= 0:
            raise ValueError("below() needs n >= 1")
        limit = (1 << 64) - ((1 << 64) % n)
        while True:
            u = self.next_u64()
            if u < limit:
                return u % n

    def randint(self, lo: int, hi: int) -> int:
        """Uniform integer in [lo, hi] inclusive."""
        return lo + self.below(hi - lo + 1)

    def choice(self, seq):
        return seq[self.below(len(seq))]

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]

    def u64_array(self, count: int) -> np.ndarray:
        """`count` outputs of next_u64, vectorized; advances the stream."""
        if count == 0:
            return np.zeros(0, dtype=np.uint64)
        idx = np.arange(1, count + 1, dtype=np.uint64)
        z = np.uint64(self._state) + idx * np.uint64(_GAMMA)
        self._state = (self._state + count * _GAMMA) & _MASK
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
        return z ^ (z >> np.uint64(31))

    def below_array(self, n: int, count: int) -> np.ndarray:
        """`count` unbiased draws from [0, n) as int64 (requires n < 2**62)."""
        if n <= 0:
            raise ValueError("below_array() needs n >= 1")
        limit = np.uint64((1 << 64) - ((1 << 64) % n))
        out = self.u64_array(count)
        bad = out >= limit
        while bad.any():
            out[bad] = self.u64_array(int(bad.sum()))
            bad = out >= limit
        return (out % np.uint64(n)).astype(np.int64)
