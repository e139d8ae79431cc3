"""Samplers: finite permutations with inversion-weighted law, and the
one-sided infinite process they converge to.

The finite sampler fills positions left to right; position i receives the
k-th smallest still-unused value with probability proportional to q^(k-1)
(truncated geometric on the remaining count).  The total of (k-1) over all
positions is exactly the inversion count, which is what makes the scheme
exact for the target law.

The infinite-process sampler runs the same recipe with an untruncated
geometric rank on the infinite unused set; it only makes sense for q < 1.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._kernels import decode_ranks, decode_ranks_batch
from .errors import BadParameter, NotABijection, TooLarge
from .perms import Permutation
from .rng import RngStream

#: refuse to materialise batches bigger than this many int64 entries (~1 GiB)
_BATCH_ENTRY_CAP = 2**27


def _check_q_positive(q: float) -> float:
    q = float(q)
    if not math.isfinite(q) or q <= 0.0:
        raise BadParameter(f"q must be a positive finite number, got {q!r}")
    return q


def _check_q_unit(q: float) -> float:
    q = float(q)
    if not (0.0 < q < 1.0):
        raise BadParameter(f"q must lie strictly inside (0, 1), got {q!r}")
    return q


def geometric(q: float, rng: RngStream, size=None):
    """Geometric draws on {1, 2, ...} with P(k) = q^(k-1) (1-q), q in (0,1).

    Sampled by CDF inversion from one uniform per draw.  Returns a Python int
    for ``size=None``, else an int64 array.
    """
    q = _check_q_unit(q)
    lq = math.log(q)
    if size is None:
        u = rng.uniform()
        if u <= 0.0:
            return 1
        return max(1, math.ceil(math.log1p(-u) / lq))
    u = rng.uniform(size)
    k = np.ceil(np.log1p(-u) / lq)
    return np.maximum(k, 1.0).astype(np.int64)


def _rank_draws(n: int, q: float, rng: RngStream) -> np.ndarray:
    """Truncated-geometric insertion ranks for one size-n permutation.

    Entry t is uniform on 1..(n-t) weights q^(k-1); vectorised over positions
    with one uniform each.  For q > 1 the rank is drawn as a reflected
    truncated geometric with ratio 1/q, which keeps everything in (0, 1] and
    avoids overflow.
    """
    m = np.arange(n, 0, -1, dtype=np.float64)
    u = rng.uniform(n)
    return _ranks_from_uniforms(u, m, q)


def _ranks_from_uniforms(u: np.ndarray, m: np.ndarray, q: float) -> np.ndarray:
    if q == 1.0:
        k = np.floor(u * m) + 1.0
    elif q < 1.0:
        lq = math.log(q)
        k = np.ceil(np.log1p(-u * (1.0 - np.exp(m * lq))) / lq)
    else:
        r = 1.0 / q
        lr = math.log(r)
        j = np.ceil(np.log1p(-u * (1.0 - np.exp(m * lr))) / lr)
        j = np.minimum(np.maximum(j, 1.0), m)
        k = m - j + 1.0
    k = np.minimum(np.maximum(k, 1.0), m)
    return k.astype(np.int64)


def sample_finite(n: int, q: float, rng: RngStream) -> Permutation:
    """Draw one permutation of {1, ..., n} with probability q^inv / Z.

    >>> from mallowsim.rng import RngStream
    >>> sample_finite(4, 1e-9, RngStream(1)).image
    (1, 2, 3, 4)
    """
    q = _check_q_positive(q)
    n = int(n)
    if n < 0:
        raise BadParameter("n must be non-negative")
    if n == 0:
        return Permutation(0, ())
    ranks = _rank_draws(n, q, rng)
    image = decode_ranks(ranks)
    return Permutation._trusted(n, tuple(int(v) for v in image))


def sample_finite_batch(n: int, q: float, reps: int, rng: RngStream) -> np.ndarray:
    """Draw ``reps`` permutations at once; returns an int64 (reps, n) array.

    Rows are independent and the whole batch consumes exactly reps*n uniforms
    in row order, so outputs are reproducible regardless of chunking by the
    caller.
    """
    q = _check_q_positive(q)
    n, reps = int(n), int(reps)
    if n < 0 or reps < 0:
        raise BadParameter("n and reps must be non-negative")
    if reps * max(n, 1) > _BATCH_ENTRY_CAP:
        raise TooLarge(
            f"batch of {reps} x {n} entries exceeds the in-memory cap; chunk the reps"
        )
    if n == 0 or reps == 0:
        return np.empty((reps, n), dtype=np.int64)
    u = rng.uniform((reps, n))
    m = np.arange(n, 0, -1, dtype=np.float64)
    ranks = _ranks_from_uniforms(u, m[None, :], q)
    return decode_ranks_batch(ranks)


@dataclass(frozen=True)
class ProcessPrefix:
    """First ``t`` values of the infinite one-sided process (q < 1).

    ``values`` are the images of 1..t: distinct positive integers, not
    necessarily forming {1..t}.  The prefix regenerates exactly at the times
    where the values seen so far are {1..k}.
    """

    q: float
    t: int
    values: tuple

    def __post_init__(self):
        if self.t != len(self.values):
            raise NotABijection("t does not match the number of values")
        if len(set(self.values)) != len(self.values):
            raise NotABijection("prefix values must be distinct")
        if any(v < 1 for v in self.values):
            raise NotABijection("prefix values must be positive")

    def renewal_times(self) -> np.ndarray:
        """Times k at which {values[0..k-1]} == {1..k} (1-based, ascending)."""
        arr = np.asarray(self.values, dtype=np.int64)
        running_max = np.maximum.accumulate(arr)
        ks = np.arange(1, self.t + 1, dtype=np.int64)
        return ks[running_max == ks]

    def pattern(self) -> Permutation:
        """Relative order of the prefix as a permutation of {1..t}."""
        from .perms import relative_order

        return relative_order(self.values)


class _GeometricBuffer:
    """Buffered scalar geometric draws (one uniform each, fixed draw order)."""

    __slots__ = ("q", "_lq", "_rng", "_chunk", "_buf", "_pos")

    def __init__(self, q: float, rng: RngStream, chunk: int = 8192):
        self.q = _check_q_unit(q)
        self._lq = math.log(q)
        self._rng = rng
        self._chunk = chunk
        self._buf = None
        self._pos = 0

    def next(self) -> int:
        if self._buf is None or self._pos >= self._buf.shape[0]:
            u = self._rng.uniform(self._chunk)
            k = np.ceil(np.log1p(-u) / self._lq)
            self._buf = np.maximum(k, 1.0).astype(np.int64)
            self._pos = 0
        z = int(self._buf[self._pos])
        self._pos += 1
        return z


def _advance(values: list, unused_below: list, unseen_start: int, z: int) -> int:
    """One insertion step: place the z-th smallest unused value.

    ``unused_below`` is the sorted list of skipped values below the running
    max; ``unseen_start`` is running max + 1.  Returns the new unseen_start.
    """
    if z <= len(unused_below):
        values.append(unused_below.pop(z - 1))
        return unseen_start
    v = unseen_start + (z - len(unused_below)) - 1
    unused_below.extend(range(unseen_start, v))
    values.append(v)
    return v + 1


def sample_process_prefix(q: float, t: int, rng: RngStream) -> ProcessPrefix:
    """Sample the first ``t`` values of the infinite process (q < 1).

    Each step places the Z-th smallest unused positive integer, Z geometric
    with ratio q.
    """
    q = _check_q_unit(q)
    t = int(t)
    if t < 0:
        raise BadParameter("t must be non-negative")
    geom = _GeometricBuffer(q, rng)
    values: list = []
    unused_below: list = []
    unseen_start = 1
    for _ in range(t):
        unseen_start = _advance(values, unused_below, unseen_start, geom.next())
    return ProcessPrefix(q, t, tuple(values))


def driving_draws(values: Sequence[int]) -> tuple:
    """Recover the geometric ranks that produce a given process prefix.

    Inverse of :func:`values_from_draws`; raises :class:`BadParameter` if the
    values cannot arise from the insertion dynamics (e.g. a value repeats).
    """
    unused_below: list = []
    x = 0
    out = []
    for v in values:
        v = int(v)
        if v < 1:
            raise BadParameter("prefix values must be positive")
        if v <= x:
            i = bisect.bisect_left(unused_below, v)
            if i >= len(unused_below) or unused_below[i] != v:
                raise BadParameter(f"value {v} was already used")
            unused_below.pop(i)
            out.append(i + 1)
        else:
            out.append(len(unused_below) + (v - x))
            unused_below.extend(range(x + 1, v))
            x = v
    return tuple(out)


def values_from_draws(draws: Sequence[int]) -> tuple:
    """Replay insertion dynamics for explicit ranks; inverse of driving_draws."""
    values: list = []
    unused_below: list = []
    unseen_start = 1
    for z in draws:
        z = int(z)
        if z < 1:
            raise BadParameter("draws must be >= 1")
        unseen_start = _advance(values, unused_below, unseen_start, z)
    return tuple(values)
