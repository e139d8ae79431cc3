"""Numba kernels for the hot loops.

Everything here works on plain int64 arrays; the public API wraps these.  The
kernels are deterministic pure functions, compiled with ``cache=True`` so the
compilation cost is paid once per machine, not once per process.

``decode_ranks`` is the workhorse: it turns a sequence of insertion ranks
(rank of each value among the values still unused) into the permutation image,
using a Fenwick tree with binary-lifting order-statistic selection, O(n log n).
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def decode_ranks(ranks):
    """Map insertion ranks (1-based, ranks[t] <= n - t) to a permutation image.

    Position t receives the ranks[t]-th smallest value not used so far.
    Inverse of the "rank among unused values" encoding.
    """
    n = ranks.shape[0]
    tree = np.zeros(n + 1, np.int64)
    for i in range(1, n + 1):
        tree[i] += 1
        j = i + (i & -i)
        if j <= n:
            tree[j] += tree[i]
    logn = 0
    while (1 << (logn + 1)) <= n:
        logn += 1
    out = np.empty(n, np.int64)
    for t in range(n):
        rem = ranks[t]
        pos = 0
        pw = 1 << logn
        while pw:
            npos = pos + pw
            if npos <= n and tree[npos] < rem:
                pos = npos
                rem -= tree[npos]
            pw >>= 1
        val = pos + 1
        out[t] = val
        j = val
        while j <= n:
            tree[j] -= 1
            j += j & -j
    return out


@njit(cache=True)
def decode_ranks_batch(ranks):
    """Row-wise :func:`decode_ranks` for a (reps, n) matrix."""
    reps, n = ranks.shape
    out = np.empty((reps, n), np.int64)
    tree = np.zeros(n + 1, np.int64)
    logn = 0
    while (1 << (logn + 1)) <= n:
        logn += 1
    for r in range(reps):
        for i in range(n + 1):
            tree[i] = 0
        for i in range(1, n + 1):
            tree[i] += 1
            j = i + (i & -i)
            if j <= n:
                tree[j] += tree[i]
        for t in range(n):
            rem = ranks[r, t]
            pos = 0
            pw = 1 << logn
            while pw:
                npos = pos + pw
                if npos <= n and tree[npos] < rem:
                    pos = npos
                    rem -= tree[npos]
                pw >>= 1
            val = pos + 1
            out[r, t] = val
            j = val
            while j <= n:
                tree[j] -= 1
                j += j & -j
    return out


@njit(cache=True)
def cycle_lengths_reps(image):
    """Cycle lengths of a permutation image plus each cycle's smallest position.

    Returns ``(lengths, anchors)`` where ``anchors[c]`` is the minimal 1-based
    position in cycle ``c``.  The anchor lets callers attribute a cycle to a
    sub-block without relabelling anything.
    """
    n = image.shape[0]
    seen = np.zeros(n, np.uint8)
    lengths = np.empty(n, np.int64)
    anchors = np.empty(n, np.int64)
    count = 0
    for start in range(n):
        if seen[start]:
            continue
        length = 0
        p = start
        while not seen[p]:
            seen[p] = 1
            length += 1
            p = image[p] - 1
        lengths[count] = length
        anchors[count] = start + 1
        count += 1
    return lengths[:count].copy(), anchors[:count].copy()


@njit(cache=True)
def cycle_stats_batch(images, i_max):
    """Per-row cycle-count table for a (reps, n) batch of images.

    Column 0 holds the total number of cycles; column i (1 <= i <= i_max)
    holds the number of cycles of length exactly i.
    """
    reps, n = images.shape
    out = np.zeros((reps, i_max + 1), np.int64)
    seen = np.zeros(n, np.uint8)
    for r in range(reps):
        for i in range(n):
            seen[i] = 0
        for start in range(n):
            if seen[start]:
                continue
            length = 0
            p = start
            while not seen[p]:
                seen[p] = 1
                length += 1
                p = images[r, p] - 1
            out[r, 0] += 1
            if length <= i_max:
                out[r, length] += 1
    return out


def warm_up():
    """Trigger compilation of all kernels on tiny inputs."""
    r = np.array([1], dtype=np.int64)
    decode_ranks(r)
    decode_ranks_batch(r.reshape(1, 1))
    cycle_lengths_reps(r)
    cycle_stats_batch(r.reshape(1, 1), 1)
