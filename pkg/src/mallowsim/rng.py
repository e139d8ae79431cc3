"""Deterministic random-number streams.

A :class:`RngStream` is addressed by ``(seed, stream_id)`` and is built on
``PCG64DXSM`` through :class:`numpy.random.SeedSequence`, so two streams with
different ids are statistically independent while a given address always
reproduces the same draws.  Streams can spawn children deterministically;
parallel code hands ``stream.child(k)`` to the worker for partition ``k`` and
the merged output does not depend on how the partitions were scheduled.
"""

from __future__ import annotations

import numpy as np


class RngStream:
    """Reproducible stream of randomness addressed by ``(seed, stream_id)``.

    The underlying generator is created eagerly; the object is cheap enough to
    construct per task.  ``child(k)`` derives an independent stream by
    extending the spawn key, so ``RngStream(s, i).child(k)`` is a pure function
    of ``(s, i, k)``.
    """

    __slots__ = ("seed", "stream_id", "_spawn_key", "_gen")

    def __init__(self, seed: int, stream_id: int = 0, _spawn_key=None):
        self.seed = int(seed)
        self.stream_id = int(stream_id)
        if self.seed < 0 or self.stream_id < 0:
            from .errors import BadParameter

            raise BadParameter("seed and stream_id must be non-negative")
        self._spawn_key = (self.stream_id,) if _spawn_key is None else _spawn_key
        ss = np.random.SeedSequence(entropy=self.seed, spawn_key=self._spawn_key)
        self._gen = np.random.Generator(np.random.PCG64DXSM(ss))

    def child(self, index: int) -> "RngStream":
        """Derive the ``index``-th independent child stream."""
        out = object.__new__(RngStream)
        RngStream.__init__(
            out, self.seed, self.stream_id, self._spawn_key + (int(index),)
        )
        return out

    def uniform(self, size=None):
        """Uniform(0,1) draws; a Python float when ``size`` is None."""
        return self._gen.random(size)

    def integers(self, low, high=None, size=None):
        return self._gen.integers(low, high, size)

    @property
    def generator(self) -> np.random.Generator:
        """The raw numpy generator (for scipy interop etc.)."""
        return self._gen

    def __repr__(self):
        return f"RngStream(seed={self.seed}, stream_id={self.stream_id}, key={self._spawn_key})"
