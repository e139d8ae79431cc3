"""Regenerative structure: cut points, block decompositions, and the
bookkeeping Markov chain whose zeros mark the cuts.

Two decompositions of a permutation are implemented:

* additive: split after every position k whose prefix holds exactly the
  values {1..k}; blocks concatenate along the diagonal.  For q < 1 the blocks
  of the infinite process are i.i.d. irreducible excursions.
* anti-additive (symmetric): split on nested position rings {k+1..n-k} whose
  complement maps the first k positions onto the top k values and vice versa;
  natural for q > 1, where permutations concentrate near the reversal.

The bookkeeping chain tracks how many values below the running maximum are
still unused; it sits at zero exactly at the additive cut times.  A closed
form lets long trajectories be scanned with vectorised running maxima rather
than a Python loop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .errors import (
    BadParameter,
    ExcursionTooLong,
    NotABijection,
    ReturnTooLong,
)
from .perms import Permutation, cycle_counts
from .report import EstimateReport, mean_report
from .rng import RngStream
from .sampler import (
    _advance,
    _check_q_unit,
    _GeometricBuffer,
    geometric,
    sample_finite_batch,
)

#: default cap on single-excursion / single-return length before giving up
DEFAULT_STEP_CAP = 10_000_000


def chain_step(m: int, z: int) -> int:
    """One transition of the bookkeeping chain: max(m, z) - 1.

    ``m`` counts unused values below the running maximum, ``z`` is this
    step's geometric rank draw.

    >>> chain_step(0, 1)
    0
    >>> chain_step(0, 4)
    3
    >>> chain_step(2, 1)
    1
    """
    m, z = int(m), int(z)
    if m < 0:
        raise BadParameter("chain state must be non-negative")
    if z < 1:
        raise BadParameter("driving draw must be >= 1")
    return max(m, z) - 1


def chain_renewal_times(draws: Sequence[int]) -> list:
    """Times t >= 1 at which the chain driven by ``draws`` is at zero.

    Steps through :func:`chain_step` one draw at a time (deliberately not
    vectorised: this is the reference implementation the fast scans are
    checked against).
    """
    m = 0
    out = []
    for t, z in enumerate(draws, start=1):
        m = chain_step(m, z)
        if m == 0:
            out.append(t)
    return out


def additive_cuts(w: Permutation) -> list:
    """Positions k where the first k entries are exactly {1..k}.

    Always contains n for n >= 1 (and is empty for n = 0).

    >>> from mallowsim.perms import make_permutation
    >>> additive_cuts(make_permutation([2, 1, 4, 3]))
    [2, 4]
    """
    if w.n == 0:
        return []
    arr = w.as_array()
    ks = np.arange(1, w.n + 1, dtype=np.int64)
    return [int(k) for k in ks[np.maximum.accumulate(arr) == ks]]


def antiadditive_cuts(w: Permutation) -> list:
    """Depths k <= n/2 such that w maps {1..k} onto {n-k+1..n} and back.

    At such a depth the outer ring of positions decouples from the middle.

    >>> from mallowsim.perms import make_permutation
    >>> antiadditive_cuts(make_permutation([4, 3, 2, 1]))
    [1, 2]
    >>> antiadditive_cuts(make_permutation([3, 4, 1, 2]))
    [2]
    """
    half = w.n // 2
    if half == 0:
        return []
    arr = w.as_array()
    prefix_min = np.minimum.accumulate(arr[:half])
    suffix_max = np.maximum.accumulate(arr[::-1][:half])
    ks = np.arange(1, half + 1, dtype=np.int64)
    hit = (prefix_min == w.n - ks + 1) & (suffix_max == ks)
    return [int(k) for k in ks[hit]]


@dataclass(frozen=True)
class Excursion:
    """An irreducible additive block, relabelled to a permutation of {1..T}.

    Irreducible means the only additive cut is at T itself.
    """

    length: int
    block: Permutation

    def __post_init__(self):
        if self.length != self.block.n or self.length < 1:
            raise NotABijection("excursion length must match its block size (>= 1)")
        if additive_cuts(self.block) != [self.length]:
            raise NotABijection("excursion block is reducible")


@dataclass(frozen=True)
class SymmetricBlock:
    """A block of the anti-additive decomposition.

    ``kind`` is "pair" for a ring between consecutive symmetric cuts
    (relabelled to {1..2m}, mapping {1..m} onto {m+1..2m} and back) or
    "central" for the innermost part, which has no symmetric cut of its own.
    ``parity`` optionally records the parity ("even"/"odd") of the ambient
    permutation the block was harvested from.
    """

    length: int
    block: Permutation
    kind: str
    parity: Optional[str] = None

    def __post_init__(self):
        if self.kind not in ("pair", "central"):
            raise BadParameter(f"unknown block kind {self.kind!r}")
        if self.length != self.block.n:
            raise NotABijection("block length must match its permutation size")
        if self.kind == "pair":
            if self.length % 2 or self.length == 0:
                raise NotABijection("pair blocks have positive even length")
            m = self.length // 2
            img = self.block.image
            top = all(v > m for v in img[:m])
            bottom = all(v <= m for v in img[m:])
            if not (top and bottom):
                raise NotABijection("pair block must swap its lower and upper half")
        else:
            if antiadditive_cuts(self.block) != []:
                raise NotABijection("central block admits a symmetric cut")


@dataclass(frozen=True)
class Decomposition:
    """A permutation split into blocks along additive or anti-additive cuts.

    For ``kind == "additive"`` the blocks are :class:`Excursion` objects in
    left-to-right order; the last one touches the window boundary and is
    flagged (not dropped) because its law is boundary-affected.

    For ``kind == "antiadditive"`` the blocks are the pair rings outside-in
    followed by the central block (possibly of length 0 for even n).  The
    outermost ring touches the boundary and is flagged likewise.
    """

    kind: str
    source: Permutation
    cut_points: tuple
    blocks: tuple

    @property
    def boundary_index(self) -> Optional[int]:
        """Index into ``blocks`` of the boundary-affected block, if any."""
        if self.kind == "additive":
            return len(self.blocks) - 1 if self.blocks else None
        return 0 if len(self.blocks) > 1 else None

    def interior_blocks(self) -> tuple:
        """Blocks whose law is unaffected by the window boundary.

        Additive: all but the trailing block.  Anti-additive: pair rings
        except the outermost (the central block is excluded here; it follows
        its own limit law and is exposed via :meth:`central_block`).
        """
        if self.kind == "additive":
            return self.blocks[:-1]
        return self.blocks[1:-1]

    def central_block(self) -> Optional[SymmetricBlock]:
        if self.kind != "antiadditive":
            return None
        return self.blocks[-1]

    def reassemble(self) -> Permutation:
        """Invert the decomposition; always reproduces the source exactly."""
        n = self.source.n
        out = [0] * n
        if self.kind == "additive":
            prev = 0
            for b in self.blocks:
                for i, v in enumerate(b.block.image):
                    out[prev + i] = prev + v
                prev += b.length
        else:
            prev = 0
            for b in self.blocks[:-1]:
                m = b.length // 2
                k = prev + m
                positions = list(range(prev + 1, k + 1)) + list(
                    range(n - k + 1, n - prev + 1)
                )
                for i, v in enumerate(b.block.image):
                    if v <= m:
                        out[positions[i] - 1] = prev + v
                    else:
                        out[positions[i] - 1] = (n - k) + (v - m)
                prev = k
            for i, v in enumerate(self.blocks[-1].block.image):
                out[prev + i] = prev + v
        return Permutation(n, tuple(out))

    def to_dict(self, include_images: bool = True) -> dict:
        blocks = []
        for i, b in enumerate(self.blocks):
            entry = {
                "length": b.length,
                "cycle_counts": dict(sorted(cycle_counts(b.block).counts.items())),
                "boundary": i == self.boundary_index,
            }
            if isinstance(b, SymmetricBlock):
                entry["kind"] = b.kind
                if b.parity is not None:
                    entry["parity"] = b.parity
            if include_images:
                entry["image"] = list(b.block.image)
            blocks.append(entry)
        return {
            "kind": self.kind,
            "n": self.source.n,
            "cut_points": list(self.cut_points),
            "blocks": blocks,
        }


def decompose_additive(w: Permutation) -> Decomposition:
    """Split ``w`` into irreducible excursion blocks at its additive cuts."""
    cuts = additive_cuts(w)
    blocks = []
    prev = 0
    for c in cuts:
        img = tuple(v - prev for v in w.image[prev:c])
        blocks.append(Excursion(c - prev, Permutation(c - prev, img)))
        prev = c
    return Decomposition("additive", w, tuple(cuts), tuple(blocks))


def decompose_antiadditive(w: Permutation) -> Decomposition:
    """Split ``w`` into pair rings plus a central block at its symmetric cuts.

    The central block may be empty (length 0) when n is even and the cuts
    reach depth n/2.
    """
    n = w.n
    cuts = antiadditive_cuts(w)
    img = w.image
    blocks = []
    prev = 0
    for k in cuts:
        m = k - prev
        positions = list(range(prev + 1, k + 1)) + list(range(n - k + 1, n - prev + 1))
        ring = []
        for p in positions:
            v = img[p - 1]
            if prev < v <= k:
                ring.append(v - prev)
            else:
                ring.append(m + (v - (n - k)))
        blocks.append(SymmetricBlock(2 * m, Permutation(2 * m, tuple(ring)), "pair"))
        prev = k
    central_img = tuple(v - prev for v in img[prev : n - prev])
    blocks.append(
        SymmetricBlock(n - 2 * prev, Permutation(n - 2 * prev, central_img), "central")
    )
    return Decomposition("antiadditive", w, tuple(cuts), tuple(blocks))


# ---------------------------------------------------------------------------
# sampling excursions and chain functionals (q < 1)
# ---------------------------------------------------------------------------


def sample_excursions(
    q: float,
    count: int,
    rng: RngStream,
    max_steps: int = DEFAULT_STEP_CAP,
) -> list:
    """Sample ``count`` i.i.d. excursions of the infinite process (q < 1).

    Runs the insertion dynamics until the used values form a full interval
    {1..T}; at that moment the accumulated values are the excursion block
    verbatim.  Raises :class:`ExcursionTooLong` if a single excursion exceeds
    ``max_steps`` placements.
    """
    q = _check_q_unit(q)
    if count < 0:
        raise BadParameter("count must be non-negative")
    geom = _GeometricBuffer(q, rng)
    out = []
    for _ in range(count):
        values: list = []
        unused_below: list = []
        unseen_start = 1
        while True:
            if len(values) >= max_steps:
                raise ExcursionTooLong(
                    f"excursion exceeded {max_steps} steps at q={q}"
                )
            unseen_start = _advance(values, unused_below, unseen_start, geom.next())
            if not unused_below:
                break
        out.append(Excursion(len(values), Permutation(len(values), tuple(values))))
    return out


def _zero_times_chunk(z: np.ndarray, t0: int, carry: int):
    """Zeros of the bookkeeping chain on one chunk of draws.

    Uses the closed form M_t = max_k<=t (Z_k + k - 1) - t; ``carry`` is the
    running max so far, ``t0`` the global time before this chunk.  Returns
    (zero_times, new_carry).
    """
    ks = np.arange(t0 + 1, t0 + z.shape[0] + 1, dtype=np.int64)
    b = np.maximum.accumulate(np.maximum(z + ks - 1, carry))
    return ks[b == ks], int(b[-1])


def excursion_lengths(
    q: float,
    count: int,
    rng: RngStream,
    max_steps: int = DEFAULT_STEP_CAP,
) -> np.ndarray:
    """Lengths of ``count`` consecutive excursions, without the blocks.

    Scans one long chain trajectory with the vectorised closed form, so this
    is much faster than :func:`sample_excursions` when only the sizes matter.
    Agrees with it in law; tests check both routes against each other.
    """
    q = _check_q_unit(q)
    if count < 0:
        raise BadParameter("count must be non-negative")
    lengths: list = []
    t0 = 0
    carry = 0
    last_zero = 0
    chunk = 1 << 16
    while len(lengths) < count:
        z = geometric(q, rng, size=chunk)
        zeros, carry = _zero_times_chunk(z, t0, carry)
        if zeros.size:
            gaps = np.diff(zeros, prepend=last_zero)
            lengths.extend(int(g) for g in gaps)
            last_zero = int(zeros[-1])
        t0 += chunk
        if t0 - last_zero > max_steps:
            raise ExcursionTooLong(f"no renewal within {max_steps} steps at q={q}")
    return np.asarray(lengths[:count], dtype=np.int64)


def occupation_distribution(
    q: float,
    steps: int,
    rng: RngStream,
    burn_in: int = 0,
) -> np.ndarray:
    """Empirical pmf of the chain state over a long trajectory.

    Runs ``steps`` transitions from state 0 and histograms the states seen
    after the first ``burn_in``.  Returns the pmf as an array indexed by
    state (trailing zeros trimmed).
    """
    q = _check_q_unit(q)
    steps, burn_in = int(steps), int(burn_in)
    if steps <= 0 or burn_in < 0 or burn_in >= steps:
        raise BadParameter("need steps > burn_in >= 0")
    hist = np.zeros(64, dtype=np.int64)
    t0 = 0
    carry = 0
    chunk = 1 << 16
    while t0 < steps:
        size = min(chunk, steps - t0)
        z = geometric(q, rng, size=size)
        ks = np.arange(t0 + 1, t0 + size + 1, dtype=np.int64)
        b = np.maximum.accumulate(np.maximum(z + ks - 1, carry))
        carry = int(b[-1])
        m = b - ks
        if t0 + size > burn_in:
            m = m[max(burn_in - t0, 0) :]
            top = int(m.max())
            if top >= hist.shape[0]:
                hist = np.concatenate(
                    [hist, np.zeros(top + 1 - hist.shape[0], dtype=np.int64)]
                )
            hist += np.bincount(m, minlength=hist.shape[0])
        t0 += size
    pmf = hist / hist.sum()
    nz = np.nonzero(pmf)[0]
    return pmf[: (nz[-1] + 1)] if nz.size else pmf[:1]


# ---------------------------------------------------------------------------
# the paired chain (symmetric decomposition, ambient q > 1)
# ---------------------------------------------------------------------------


def pair_chain_return_times(
    q: float,
    count: int,
    rng: RngStream,
    max_steps: int = DEFAULT_STEP_CAP,
) -> np.ndarray:
    """Gaps between successive joint zeros of two independent chains (q < 1).

    ``q`` is the chain parameter; callers studying an inversion-weighted
    ensemble with parameter Q > 1 should pass q = 1/Q.  Each chunk draws the
    first chain's ranks, then the second's, so output is reproducible.
    Raises :class:`ReturnTooLong` if a single gap exceeds ``max_steps``.
    """
    q = _check_q_unit(q)
    if count < 0:
        raise BadParameter("count must be non-negative")
    gaps: list = []
    t0 = 0
    carry1 = carry2 = 0
    last_zero = 0
    chunk = 1 << 16
    while len(gaps) < count:
        z1 = geometric(q, rng, size=chunk)
        z2 = geometric(q, rng, size=chunk)
        ks = np.arange(t0 + 1, t0 + chunk + 1, dtype=np.int64)
        b1 = np.maximum.accumulate(np.maximum(z1 + ks - 1, carry1))
        b2 = np.maximum.accumulate(np.maximum(z2 + ks - 1, carry2))
        carry1, carry2 = int(b1[-1]), int(b2[-1])
        zeros = ks[(b1 == ks) & (b2 == ks)]
        if zeros.size:
            gaps.extend(int(g) for g in np.diff(zeros, prepend=last_zero))
            last_zero = int(zeros[-1])
        t0 += chunk
        if t0 - last_zero > max_steps:
            raise ReturnTooLong(f"no joint return within {max_steps} steps at q={q}")
    return np.asarray(gaps[:count], dtype=np.int64)


def covering_block_length(
    q: float,
    n: int,
    reps: int,
    rng: RngStream,
    max_steps: int = DEFAULT_STEP_CAP,
) -> EstimateReport:
    """Monte Carlo law of the block length covering a fixed deep position.

    For q < 1 the additive blocks are scanned along a single chain until one
    covers time ``n``; for q > 1 the paired chain at 1/q is used and block
    lengths count two positions per step.  The covering block is size-biased:
    its mean approaches E(T^2)/E(T), not E(T).
    """
    if q <= 0 or q == 1.0:
        raise BadParameter("covering blocks need q in (0,1) or q > 1")
    n, reps = int(n), int(reps)
    if n < 1 or reps < 1:
        raise BadParameter("n and reps must be positive")
    pair = q > 1.0
    qc = 1.0 / q if pair else q
    target = (n + 1) // 2 if pair else n
    out = np.empty(reps, dtype=np.int64)
    for r in range(reps):
        prev = 0
        nxt = -1
        t0 = 0
        carry1 = carry2 = 0
        while nxt < 0:
            size = (target + 64) if t0 == 0 else 4096
            ks = np.arange(t0 + 1, t0 + size + 1, dtype=np.int64)
            z1 = geometric(qc, rng, size=size)
            b1 = np.maximum.accumulate(np.maximum(z1 + ks - 1, carry1))
            carry1 = int(b1[-1])
            mask = b1 == ks
            if pair:
                z2 = geometric(qc, rng, size=size)
                b2 = np.maximum.accumulate(np.maximum(z2 + ks - 1, carry2))
                carry2 = int(b2[-1])
                mask &= b2 == ks
            zeros = ks[mask]
            before = zeros[zeros < target]
            if before.size:
                prev = int(before[-1])
            after = zeros[zeros >= target]
            if after.size:
                nxt = int(after[0])
            t0 += size
            if t0 - max(prev, 0) > max_steps:
                raise ExcursionTooLong(
                    f"no renewal past position {n} within {max_steps} steps"
                )
        out[r] = (nxt - prev) * (2 if pair else 1)
    rep = mean_report("covering_block_length", out)
    return EstimateReport(
        rep.name,
        rep.value,
        rep.se,
        rep.count,
        variance=rep.variance,
        extra={"q": q, "n": n},
    )


# ---------------------------------------------------------------------------
# harvesting symmetric blocks from finite samples (q > 1)
# ---------------------------------------------------------------------------


def _ring_split(arr: np.ndarray):
    """Symmetric cut depths, relabelled ring images, and the central image."""
    n = arr.shape[0]
    half = n // 2
    if half:
        ks = np.arange(1, half + 1, dtype=np.int64)
        prefix_min = np.minimum.accumulate(arr[:half])
        suffix_max = np.maximum.accumulate(arr[::-1][:half])
        cuts = ks[(prefix_min == n - ks + 1) & (suffix_max == ks)]
    else:
        cuts = np.empty(0, dtype=np.int64)
    rings = []
    prev = 0
    for k in cuts:
        k = int(k)
        m = k - prev
        idx = np.concatenate([np.arange(prev, k), np.arange(n - k, n - prev)])
        vals = arr[idx]
        img = np.where(vals <= k, vals - prev, vals - (n - k) + m)
        rings.append(img.astype(np.int64))
        prev = k
    central = (arr[prev : n - prev] - prev).astype(np.int64)
    return cuts, rings, central


def sample_symmetric_blocks(
    q: float,
    n: int,
    reps: int,
    rng: RngStream,
    include_boundary: bool = False,
) -> list:
    """Harvest symmetric blocks from ``reps`` samples of size ``n`` (q > 1).

    Returns interior pair rings and central blocks, each tagged with the
    parity of ``n``.  The outermost ring of every sample touches the window
    boundary; it is excluded unless ``include_boundary`` is set (then it is
    included, still distinguishable as the first ring of its sample).
    """
    if q <= 1.0:
        raise BadParameter("symmetric-block harvest expects q > 1")
    n, reps = int(n), int(reps)
    if n < 1 or reps < 0:
        raise BadParameter("n must be >= 1 and reps >= 0")
    parity = "even" if n % 2 == 0 else "odd"
    out = []
    chunk_rows = max(1, min(reps, max(1, (1 << 22) // max(n, 1))))
    done = 0
    while done < reps:
        rows = min(chunk_rows, reps - done)
        batch = sample_finite_batch(n, q, rows, rng)
        for r in range(rows):
            cuts, rings, central = _ring_split(batch[r])
            first = 0 if include_boundary else 1
            for img in rings[first:]:
                block = Permutation(img.shape[0], tuple(int(v) for v in img))
                out.append(SymmetricBlock(block.n, block, "pair", parity))
            block = Permutation(central.shape[0], tuple(int(v) for v in central))
            out.append(SymmetricBlock(block.n, block, "central", parity))
        done += rows
    return out
