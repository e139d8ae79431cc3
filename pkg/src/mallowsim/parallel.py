"""Deterministic work partitioning.

Monte Carlo jobs are split into fixed-size partitions *before* anyone decides
how many workers will run them.  Partition i always consumes the i-th child
of the job's random stream, and results are merged in partition order, so the
output is a pure function of (task, seed) — byte-identical for 1 worker or 40.
"""

from __future__ import annotations

import multiprocessing
import os
from contextlib import contextmanager
from typing import Callable, Optional, Sequence

#: partition sizes per unit of work; constants, not tunables, so that the
#: partition plan never depends on worker count
EXCURSIONS_PER_PART = 25_000
BLOCKS_PER_PART = 50_000
REPS_PER_PART = 1_000
CASES_PER_PART = 10_000


def partition_counts(total: int, per_part: int) -> list:
    """Split ``total`` units into fixed-size chunks (last one partial)."""
    total, per_part = int(total), int(per_part)
    if total < 0 or per_part <= 0:
        raise ValueError("need total >= 0 and per_part > 0")
    out = [per_part] * (total // per_part)
    if total % per_part:
        out.append(total % per_part)
    return out


def run_partitioned(fn: Callable, part_args: Sequence, pool=None) -> list:
    """Apply ``fn`` to each partition's args, in order, serially or on a pool.

    ``fn`` must be a top-level function (picklable) when a pool is used.
    Results come back in partition order either way.
    """
    if pool is None:
        return [fn(a) for a in part_args]
    return pool.map(fn, list(part_args))


@contextmanager
def pool_context(workers: int = 1):
    """Yield a process pool for ``workers`` > 1, else None.

    Uses fork on platforms that have it (cheap, inherits warmed-up JIT
    caches); falls back to spawn elsewhere.
    """
    workers = int(workers)
    if workers <= 1:
        yield None
        return
    method = "fork" if "fork" in multiprocessing.get_all_start_methods() else "spawn"
    ctx = multiprocessing.get_context(method)
    pool = ctx.Pool(processes=workers)
    try:
        yield pool
    finally:
        pool.close()
        pool.join()


def default_workers() -> int:
    return max(1, min(4, os.cpu_count() or 1))
