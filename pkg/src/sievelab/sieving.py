"""Plain Eratosthenes machinery on numpy bitmasks.

simple_sieve covers the base range; segmented_primes walks (a, b] in
fixed-size blocks so memory stays flat no matter how far the scan runs.
Segments are independent, so they can be dispatched to a worker pool and
merged in index order without affecting the result.
"""

from __future__ import annotations

import math

import numpy as np

from . import parallel

DEFAULT_SEGMENT = 1 << 20


def simple_sieve(limit: int) -> np.ndarray:
    """All primes <= limit as an int64 array."""
    limit = int(limit)
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.flatnonzero(mask).astype(np.int64)


def _sieve_block(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in (lo, hi] given base primes covering sqrt(hi)."""
    n = hi - lo
    mask = np.ones(n, dtype=bool)  # index i is the integer lo + 1 + i
    start_val = lo + 1
    if start_val <= 1:
        mask[: min(n, 2 - start_val)] = False
    for p in base:
        p = int(p)
        if p * p > hi:
            break
        first = max(p * p, ((start_val + p - 1) // p) * p)
        if first > hi:
            continue
        mask[first - start_val :: p] = False
    return (np.flatnonzero(mask) + start_val).astype(np.int64)


def segmented_primes(a: int, b: int, segment: int = DEFAULT_SEGMENT) -> np.ndarray:
    """Primes in (a, b], sieved in blocks of the given size."""
    a, b = int(a), int(b)
    if b <= a or b < 2:
        return np.empty(0, dtype=np.int64)
    base = simple_sieve(math.isqrt(b))
    blocks = [(lo, min(lo + segment, b)) for lo in range(max(a, 1), b, segment)]
    parts = parallel.map_ordered(lambda lp: _sieve_block(lp[0], lp[1], base), blocks)
    if not parts:
        return np.empty(0, dtype=np.int64)
    return np.concatenate(parts)
