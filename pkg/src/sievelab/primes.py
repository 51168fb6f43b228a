"""Integer-set engine: primes, explicit sets, model samples, gap counters.

The two counting conventions used throughout:

  M_A(x; y) = #{n <= x : n in A, [n+1, n+floor(y)] cap A is empty}
      (n runs over elements of A; the window is the next floor(y) integers)

  N_A(x; y, k) = #{1 <= n <= floor(x) : |[n+1, n+floor(y)] cap A| = k}
      (n runs over all positive integers up to floor(x))

Both need membership known through floor(x) + floor(y); IntegerSet carries
an explicit coverage bound so under-covered queries fail loudly instead of
silently undercounting.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import kernels
from .sieving import segmented_primes

DEFAULT_MAX_SIEVE = 10**10

KINDS = ("primes", "explicit", "model-sample")


def _sieve_cap() -> int:
    env = os.environ.get("SIEVELAB_MAX_X")
    if env:
        return min(DEFAULT_MAX_SIEVE, int(float(env)))
    return DEFAULT_MAX_SIEVE


class IntegerSet:
    """A strictly increasing set of positive integers with range queries.

    coverage is the largest integer through which membership is complete;
    None means the stored elements are the whole set.
    """

    def __init__(self, elements: np.ndarray, kind: str, coverage: int | None):
        if kind not in KINDS:
            raise ValueError(f"unknown IntegerSet kind {kind!r}")
        els = np.asarray(elements, dtype=np.int64)
        if len(els) and (np.any(np.diff(els) <= 0) or els[0] < 1):
            raise ValueError("elements must be strictly increasing positive integers")
        if coverage is not None and len(els) and els[-1] > coverage:
            raise ValueError("elements extend beyond the stated coverage")
        self.elements = els
        self.kind = kind
        self.coverage = None if coverage is None else int(coverage)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, n: int) -> bool:
        i = np.searchsorted(self.elements, n)
        return bool(i < len(self.elements) and self.elements[i] == n)

    def count_upto(self, m: float) -> int:
        return int(np.searchsorted(self.elements, math.floor(m), side="right"))

    def between(self, a: float, b: float) -> np.ndarray:
        """Members in (a, b]."""
        i = np.searchsorted(self.elements, math.floor(a), side="right")
        j = np.searchsorted(self.elements, math.floor(b), side="right")
        return self.elements[i:j]

    def assert_coverage(self, m: int) -> None:
        if self.coverage is not None and m > self.coverage:
            raise ValueError(
                f"query needs membership through {m} but coverage ends at {self.coverage}"
            )

    def save(self, path: str | Path) -> None:
        """Newline-delimited decimal integers."""
        with open(path, "w") as fh:
            fh.write("\n".join(str(int(v)) for v in self.elements))
            if len(self.elements):
                fh.write("\n")

    @classmethod
    def load(cls, path: str | Path, kind: str = "explicit") -> "IntegerSet":
        vals = [int(line) for line in Path(path).read_text().split()]
        return cls(np.array(vals, dtype=np.int64), kind, None)

    @classmethod
    def from_list(cls, values, coverage: int | None = None) -> "IntegerSet":
        arr = np.array(sorted(int(v) for v in values), dtype=np.int64)
        if len(arr) != len(set(int(v) for v in values)):
            raise ValueError("explicit sets must not contain duplicates")
        return cls(arr, "explicit", coverage)


def primes_in(a: float, b: float) -> IntegerSet:
    """Primes in (a, b] as an IntegerSet (segmented sieve)."""
    cap = _sieve_cap()
    if b > cap:
        raise ValueError(f"sieve bound {b} exceeds cap {cap}")
    if b < a:
        raise ValueError(f"primes_in requires a <= b, got ({a}, {b})")
    els = segmented_primes(math.floor(a), math.floor(b))
    return IntegerSet(els, "primes", coverage=math.floor(b))


def gap_count_M(A: IntegerSet, x: float, y: float) -> int:
    """#{n <= x : n in A, no element of A in [n+1, n+floor(y)]}."""
    if y < 0:
        raise ValueError(f"gap_count_M requires y >= 0, got {y}")
    w = math.floor(y)
    xf = math.floor(x)
    A.assert_coverage(xf + w)
    els = A.elements
    upto = int(np.searchsorted(els, xf, side="right"))
    if upto == 0:
        return 0
    if w == 0:
        return upto
    # successor gap per element; elements past xf serve only as successors
    succ_gap = np.diff(els[: upto + 1]) if upto < len(els) else None
    if succ_gap is None:
        # last known element is <= x; window is empty iff coverage vouches for it
        gaps_head = np.diff(els[:upto])
        count = int(np.count_nonzero(gaps_head > w)) if upto > 1 else 0
        return count + 1  # the final element has no successor through coverage
    return int(np.count_nonzero(succ_gap > w))


def window_histogram(A: IntegerSet, x: float, y: float) -> np.ndarray:
    """hist[k] = N_A(x; y, k) for all k at once (length floor(y)+1)."""
    w = math.floor(y)
    xf = math.floor(x)
    if xf < 1:
        raise ValueError(f"window_histogram requires x >= 1, got {x}")
    A.assert_coverage(xf + w)
    els = A.between(1, xf + w)
    return kernels.window_count_hist(els, xf, w)


def interval_count_N(A: IntegerSet, x: float, y: float, k: int) -> int:
    """#{1 <= n <= floor(x) : exactly k elements of A in [n+1, n+floor(y)]}."""
    if k < 0:
        raise ValueError(f"interval_count_N requires k >= 0, got {k}")
    hist = window_histogram(A, x, y)
    return int(hist[k]) if k < len(hist) else 0


def tail_ratio(A: IntegerSet, x: float, lam: float) -> float:
    """M_A(x; lambda log x) * log x / (x * e^(-lambda)).

    Near 1 when gaps above lambda * log x occur at the exponential rate.
    """
    if lam <= 0:
        raise ValueError(f"tail_ratio requires lambda > 0, got {lam}")
    if x <= 1:
        raise ValueError(f"tail_ratio requires x > 1, got {x}")
    m = gap_count_M(A, x, lam * math.log(x))
    return m * math.log(x) / (x * math.exp(-lam))


@dataclass(frozen=True)
class GapHistogram:
    """Successor gaps of elements <= x, binned in units of log x."""

    x: float
    edges: tuple[float, ...]  # bin edges in lambda = gap/log x units
    counts: tuple[int, ...]  # len(edges) - 1 bins, final edge may be inf
    n_gaps: int


def gap_histogram(A: IntegerSet, x: float, edges) -> GapHistogram:
    edges = tuple(float(e) for e in edges)
    if len(edges) < 2 or any(b <= a for a, b in zip(edges, edges[1:])):
        raise ValueError("edges must be strictly increasing with >= 2 entries")
    xf = math.floor(x)
    els = A.elements
    upto = int(np.searchsorted(els, xf, side="right"))
    if upto >= len(els):
        upto = len(els) - 1  # last element has no known successor
    gaps = np.diff(els[: upto + 1]) / math.log(x)
    counts, _ = np.histogram(gaps, bins=np.array(edges))
    return GapHistogram(
        x=float(x), edges=edges, counts=tuple(int(c) for c in counts), n_gaps=len(gaps)
    )
