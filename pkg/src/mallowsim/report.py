"""Small result containers and standard-error helpers shared by estimators."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np


@dataclass(frozen=True)
class EstimateReport:
    """A point estimate with its standard error and sample bookkeeping."""

    name: str
    value: float
    se: float
    count: int
    variance: float = float("nan")
    extra: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "value": self.value,
            "se": self.se,
            "count": self.count,
        }
        if not math.isnan(self.variance):
            out["variance"] = self.variance
        if self.extra:
            out.update(self.extra)
        return out

    def within(self, target: float, sigmas: float = 3.0) -> bool:
        """Is ``target`` inside value +- sigmas * se?"""
        return abs(self.value - target) <= sigmas * self.se


def mean_report(name: str, values: np.ndarray) -> EstimateReport:
    """Mean of i.i.d. draws with the usual sd/sqrt(n) standard error."""
    arr = np.asarray(values, dtype=np.float64)
    n = arr.shape[0]
    var = float(np.var(arr, ddof=1)) if n > 1 else float("nan")
    se = math.sqrt(var / n) if n > 1 else float("inf")
    return EstimateReport(name, float(np.mean(arr)), se, n, variance=var)


def batch_se(values: np.ndarray, nbatches: int = 50) -> float:
    """Standard error of the overall mean from consecutive batch means.

    Robust to serial correlation as long as batches are much longer than the
    correlation length; this is the default error bar for time-average
    estimates along a single chain trajectory.
    """
    arr = np.asarray(values, dtype=np.float64)
    nbatches = max(2, min(nbatches, arr.shape[0]))
    parts = [b for b in np.array_split(arr, nbatches) if b.shape[0]]
    means = np.array([np.mean(b) for b in parts])
    return float(np.std(means, ddof=1) / math.sqrt(len(means)))


def batch_statistic_se(rows: np.ndarray, stat: Callable, nbatches: int = 50):
    """SE of an arbitrary (possibly vector-valued) statistic of i.i.d. rows.

    Splits the rows into consecutive batches, evaluates ``stat`` separately on
    each batch, and returns the elementwise std of the batch values divided by
    sqrt(#batches).  Handles nonlinear statistics (ratios, covariances) where
    the naive i.i.d. formula does not apply.
    """
    rows = np.asarray(rows)
    nbatches = max(2, min(nbatches, rows.shape[0]))
    parts = [p for p in np.array_split(rows, nbatches) if p.shape[0]]
    vals = np.array([np.asarray(stat(p), dtype=np.float64) for p in parts])
    return np.std(vals, axis=0, ddof=1) / math.sqrt(len(parts))


def combined_se(*ses: float) -> float:
    """SE of a difference of independent estimates (quadrature sum)."""
    return math.sqrt(sum(float(s) ** 2 for s in ses))


def tv_distance(p: dict, q: dict) -> float:
    """Total-variation distance between two pmfs given as {value: mass}."""
    keys = set(p) | set(q)
    return 0.5 * sum(abs(p.get(k, 0.0) - q.get(k, 0.0)) for k in keys)
