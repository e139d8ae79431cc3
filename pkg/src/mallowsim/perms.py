"""Finite permutations: representation, basic statistics, and the exact
small-n distribution used as the ground-truth oracle.

A permutation of {1, ..., n} is stored in one-line notation: ``image[i]`` is
the value at position ``i + 1``.  Everything downstream (samplers, block
decompositions, estimators) speaks this representation.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

import numpy as np

from .errors import DuplicateValue, NotABijection, TooLarge

#: Hard cap for exhaustive enumeration (9! = 362880 rows is the largest table
#: we are willing to materialise).
ENUMERATION_CAP = 9


@dataclass(frozen=True)
class Permutation:
    """A permutation of {1, ..., n} in one-line notation.

    ``image`` must be a tuple containing each of 1..n exactly once; this is
    checked at construction.  Instances are immutable and hashable.

    >>> Permutation(3, (2, 3, 1))(1)
    2
    """

    n: int
    image: tuple

    def __post_init__(self):
        if self.n != len(self.image):
            raise NotABijection(
                f"length {len(self.image)} does not match n={self.n}"
            )
        seen = bytearray(self.n)
        for v in self.image:
            if not isinstance(v, int) or v < 1 or v > self.n:
                raise NotABijection(f"value {v!r} outside 1..{self.n}")
            if seen[v - 1]:
                raise NotABijection(f"value {v} repeated")
            seen[v - 1] = 1

    @classmethod
    def _trusted(cls, n: int, image: tuple) -> "Permutation":
        """Skip validation for images we constructed ourselves."""
        out = object.__new__(cls)
        object.__setattr__(out, "n", n)
        object.__setattr__(out, "image", image)
        return out

    def __call__(self, position: int) -> int:
        """Value at ``position`` (1-based)."""
        return self.image[position - 1]

    def __len__(self) -> int:
        return self.n

    def as_array(self) -> np.ndarray:
        return np.asarray(self.image, dtype=np.int64)

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for pos, val in enumerate(self.image, start=1):
            inv[val - 1] = pos
        return Permutation._trusted(self.n, tuple(inv))


@dataclass(frozen=True)
class CycleCounts:
    """Cycle-type summary: ``counts[size]`` cycles of each size, on n points."""

    n: int
    counts: dict = field(default_factory=dict)

    def __post_init__(self):
        mass = sum(size * mult for size, mult in self.counts.items())
        if mass != self.n:
            raise NotABijection(
                f"cycle sizes account for {mass} points, expected {self.n}"
            )

    @property
    def total(self) -> int:
        """Total number of cycles."""
        return sum(self.counts.values())

    def count_of(self, size: int) -> int:
        return self.counts.get(size, 0)

    def as_vector(self, i_max: int) -> np.ndarray:
        """Counts for sizes 1..i_max as an array."""
        return np.array([self.count_of(i) for i in range(1, i_max + 1)], dtype=np.int64)


def identity(n: int) -> Permutation:
    return Permutation._trusted(n, tuple(range(1, n + 1)))


def make_permutation(values: Sequence[int]) -> Permutation:
    """Build a validated :class:`Permutation` from one-line notation.

    Raises :class:`NotABijection` if ``values`` is not a rearrangement of
    1..len(values).

    >>> make_permutation([2, 1, 3]).image
    (2, 1, 3)
    """
    return Permutation(len(values), tuple(int(v) for v in values))


def inversions(w: Permutation) -> int:
    """Number of inversions of ``w``, i.e. pairs i < j with w(i) > w(j).

    Counted by merge sort in O(n log n).

    >>> inversions(make_permutation([3, 1, 2]))
    2
    """
    total = 0

    def merge_count(a):
        nonlocal total
        if len(a) <= 1:
            return a
        mid = len(a) // 2
        left = merge_count(a[:mid])
        right = merge_count(a[mid:])
        merged = []
        i = j = 0
        while i < len(left) and j < len(right):
            if left[i] <= right[j]:
                merged.append(left[i])
                i += 1
            else:
                total += len(left) - i
                merged.append(right[j])
                j += 1
        merged.extend(left[i:])
        merged.extend(right[j:])
        return merged

    merge_count(list(w.image))
    return total


def cycle_counts(w: Permutation) -> CycleCounts:
    """Cycle-type of ``w`` as a :class:`CycleCounts`.

    >>> cycle_counts(make_permutation([2, 1, 3])).counts
    {2: 1, 1: 1}
    """
    seen = bytearray(w.n)
    counts: dict = {}
    img = w.image
    for start in range(w.n):
        if seen[start]:
            continue
        length = 0
        p = start
        while not seen[p]:
            seen[p] = 1
            length += 1
            p = img[p] - 1
        counts[length] = counts.get(length, 0) + 1
    return CycleCounts(w.n, counts)


def reverse(w: Permutation) -> Permutation:
    """Position-reversal: the image read right to left.

    An involution; composing a permutation's inversion count with its
    reversal's always gives n(n-1)/2.
    """
    return Permutation._trusted(w.n, w.image[::-1])


def relative_order(values: Sequence[float]) -> Permutation:
    """Pattern of a sequence of distinct numbers as a permutation.

    ``relative_order(x)[i]`` is the rank of ``x[i]`` among all entries.

    >>> relative_order([2.5, -1.0, 7.0]).image
    (2, 1, 3)
    """
    arr = np.asarray(values)
    if arr.ndim != 1:
        raise DuplicateValue("expected a one-dimensional sequence")
    n = arr.shape[0]
    if len(np.unique(arr)) != n:
        raise DuplicateValue("values must be pairwise distinct")
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(n, dtype=np.int64)
    ranks[order] = np.arange(1, n + 1)
    return Permutation._trusted(n, tuple(int(r) for r in ranks))


def insertion_ranks(w: Permutation) -> tuple:
    """Ranks of each value among the values not yet used at its position.

    Positionwise inverse of the decoding used by the sampler: position i gets
    the k-th smallest unused value, and this returns those k's.  The sum of
    (rank - 1) equals the inversion count.  Quadratic scan; fine for the
    sizes where the encoded form is wanted.
    """
    arr = w.as_array()
    out = []
    for i in range(w.n):
        out.append(int(arr[i] - np.count_nonzero(arr[:i] < arr[i])))
    return tuple(out)


def mallows_normalizer(n: int, q: float) -> float:
    """Normalising constant: product over k <= n of (1 + q + ... + q^(k-1)).

    Exact floating product; may return ``inf`` for very large n with q > 1,
    in which case use :func:`log_mallows_normalizer`.

    >>> mallows_normalizer(3, 2.0)
    21.0
    """
    if n < 0:
        raise TooLarge("n must be non-negative")
    if q < 0:
        raise TooLarge("q must be non-negative")
    z = 1.0
    for k in range(1, n + 1):
        if q == 1.0:
            z *= k
        else:
            z *= (1.0 - q**k) / (1.0 - q)
    return z


def log_mallows_normalizer(n: int, q: float) -> float:
    """Natural log of :func:`mallows_normalizer`, safe for large n or q > 1."""
    if n < 0:
        raise TooLarge("n must be non-negative")
    if q <= 0:
        raise TooLarge("q must be positive")
    if q == 1.0:
        return math.lgamma(n + 1)
    out = 0.0
    if q < 1.0:
        lq = math.log(q)
        for k in range(1, n + 1):
            out += math.log1p(-math.exp(k * lq)) - math.log1p(-q)
    else:
        lq = math.log(q)
        for k in range(1, n + 1):
            out += k * lq + math.log1p(-q ** (-k)) - math.log(q - 1.0)
    return out


@dataclass(frozen=True)
class ExactDistribution:
    """Full probability table over all permutations of {1, ..., n}.

    ``images`` has one row per permutation (lexicographic order),
    ``inversion_counts`` the matching inversion numbers, and ``probabilities``
    the exact weights q^inv / Z_n(q).
    """

    n: int
    q: float
    images: np.ndarray
    inversion_counts: np.ndarray
    probabilities: np.ndarray

    def entries(self) -> Iterator:
        """Yield ``(Permutation, probability)`` pairs."""
        for row, p in zip(self.images, self.probabilities):
            yield Permutation._trusted(self.n, tuple(int(v) for v in row)), float(p)

    def expectation_of(self, values: np.ndarray) -> float:
        """Expectation of a per-permutation value array (row-aligned)."""
        return float(np.sum(self.probabilities * np.asarray(values, dtype=np.float64)))

    def probability(self, w) -> float:
        """Probability of one permutation (accepts a Permutation or a sequence)."""
        image = w.image if isinstance(w, Permutation) else make_permutation(w).image
        return float(self.probabilities[_lex_index(image)])

    def total_mass(self) -> float:
        return float(np.sum(self.probabilities))

    def write_csv(self, path) -> None:
        """Dump the table with columns permutation, inversions, probability."""
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["permutation", "inversions", "probability"])
            for row, inv, p in zip(
                self.images, self.inversion_counts, self.probabilities
            ):
                writer.writerow(
                    [" ".join(str(int(v)) for v in row), int(inv), repr(float(p))]
                )


def _lex_index(image: tuple) -> int:
    """Index of ``image`` among all permutations of its size in lex order."""
    n = len(image)
    idx = 0
    for i in range(n):
        smaller_later = sum(1 for j in range(i + 1, n) if image[j] < image[i])
        idx += smaller_later * math.factorial(n - 1 - i)
    return idx


def exact_distribution(n: int, q: float, cap: int = ENUMERATION_CAP) -> ExactDistribution:
    """Enumerate all n! permutations with their exact probabilities.

    Probabilities are proportional to q raised to the inversion count.  Only
    sensible for small n; raises :class:`TooLarge` beyond ``cap``.
    """
    if n > cap:
        raise TooLarge(f"refusing to enumerate {n}! permutations (cap {cap})")
    if n < 0:
        raise TooLarge("n must be non-negative")
    if q < 0:
        raise TooLarge("q must be non-negative")
    if n == 0:
        return ExactDistribution(
            0,
            q,
            np.empty((1, 0), dtype=np.int64),
            np.zeros(1, dtype=np.int64),
            np.ones(1, dtype=np.float64),
        )
    images = np.array(
        list(itertools.permutations(range(1, n + 1))), dtype=np.int64
    )
    inv = np.zeros(images.shape[0], dtype=np.int64)
    for i in range(n):
        for j in range(i + 1, n):
            inv += images[:, i] > images[:, j]
    if q == 1.0:
        weights = np.ones_like(inv, dtype=np.float64)
    else:
        weights = np.asarray(q, dtype=np.float64) ** inv
    probs = weights / mallows_normalizer(n, q)
    return ExactDistribution(n, q, images, inv, probs)


def exact_expectation(
    n: int,
    q: float,
    statistic: Callable[[Permutation], float],
    cap: int = ENUMERATION_CAP,
) -> float:
    """Exact expectation of ``statistic`` under the size-n, parameter-q law.

    ``statistic`` receives each of the n! permutations once; this is the
    brute-force oracle that Monte Carlo estimates are checked against.
    """
    dist = exact_distribution(n, q, cap=cap)
    acc = np.empty(dist.images.shape[0], dtype=np.float64)
    for k, (w, _) in enumerate(dist.entries()):
        acc[k] = statistic(w)
    return dist.expectation_of(acc)


def cycle_count_statistic(size: int) -> Callable[[Permutation], float]:
    """Statistic factory: number of cycles of exactly ``size`` elements."""

    def stat(w: Permutation) -> float:
        return float(cycle_counts(w).count_of(size))

    return stat


def total_cycles_statistic() -> Callable[[Permutation], float]:
    """Statistic factory: total number of cycles."""

    def stat(w: Permutation) -> float:
        return float(cycle_counts(w).total)

    return stat
