"""Portable, seedable random streams.

Every stream is Philox4x64-10 keyed with the two 64-bit words
``(seed, stream_id)`` and counter starting at zero, read as raw uint64
words. All derived variates are defined here from those words so another
implementation can reproduce them bit for bit:

* uniform double: ``(w >> 11) * 2**-53`` in [0, 1)
* uniform float on [lo, hi): ``lo + (hi - lo) * u``
* integer on [lo, hi] inclusive: ``lo + floor(u * (hi - lo + 1))``
* standard normal: Box-Muller from two uniforms ``u1, u2`` taken in order,
  ``sqrt(-2 ln(1 - u1)) * cos(2 pi u2)``; one normal per pair
* permutation: Fisher-Yates, ``i`` from n-1 down to 1, swap ``i`` with an
  integer on [0, i]

Array draws are filled in C order.
"""
from __future__ import annotations

import numpy as np

GENERATOR_ID = "philox4x64-10:key=(seed,stream):u53:box-muller"

STREAM_NETWORK = 0
STREAM_READINGS = 1
STREAM_LOSSES = 2
STREAM_NOISE = 3

_SEED_LIMIT = 2**64


class Stream:
    def __init__(self, seed: int, stream: int):
        if not 0 <= int(seed) < _SEED_LIMIT:
            raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
        if not 0 <= int(stream) < _SEED_LIMIT:
            raise ValueError(f"stream id must be an unsigned 64-bit integer, got {stream}")
        self.seed = int(seed)
        self.stream = int(stream)
        self._bits = np.random.Philox(key=np.array([self.seed, self.stream], dtype=np.uint64))

    def raw(self, count: int) -> np.ndarray:
        if count == 0:
            return np.zeros(0, dtype=np.uint64)
        return np.asarray(self._bits.random_raw(count), dtype=np.uint64)

    def random(self, size=()) -> np.ndarray:
        shape = tuple(np.atleast_1d(size)) if size != () else ()
        count = int(np.prod(shape)) if shape else 1
        u = (self.raw(count) >> np.uint64(11)).astype(np.float64) * 2.0**-53
        return u.reshape(shape) if shape else u[0]

    def uniform(self, low, high, size=()):
        return low + (high - low) * self.random(size)

    def integers(self, low: int, high: int, size=()):
        """Integers on the closed interval [low, high]."""
        if high < low:
            raise ValueError("empty integer range")
        span = high - low + 1
        k = np.floor(self.random(size) * span).astype(np.int64)
        return low + np.minimum(k, span - 1)

    def normal(self, size=()):
        shape = tuple(np.atleast_1d(size)) if size != () else ()
        count = int(np.prod(shape)) if shape else 1
        u = self.random(2 * count).reshape(count, 2) if count else np.zeros((0, 2))
        g = np.sqrt(-2.0 * np.log1p(-u[:, 0])) * np.cos(2.0 * np.pi * u[:, 1])
        return g.reshape(shape) if shape else g[0]

    def permutation(self, n: int) -> np.ndarray:
        out = np.arange(n)
        for i in range(n - 1, 0, -1):
            j = int(self.integers(0, i))
            out[i], out[j] = out[j], out[i]
        return out
