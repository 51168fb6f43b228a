"""Pure-python (numpy) implementations of the hot kernels.

The compiled extension sievelab._kernels implements exactly the same four
functions with exactly the same bit-for-bit outputs; sievelab.kernels picks
whichever is importable.  Keep logic changes mirrored in the .pyx file.

Trial seeds and per-prime residue keys are precomputed by the caller (see
sievelab.seeds), so the only randomness primitive needed here is the
splitmix64 finalizer applied to (trial seed XOR prime key).
"""

from __future__ import annotations

import numpy as np

from .seeds import mix64_vec

_TRIAL_CHUNK = 8192


def _residues_for_trials(
    tseeds: np.ndarray, pkey: int, p: int, forbid_zero: bool
) -> np.ndarray:
    """alpha_p per trial, as int64; support [0,p-1] or [1,p-1] if forbidden 0."""
    h = mix64_vec(tseeds ^ np.uint64(pkey))
    if forbid_zero:
        if p == 2:
            return np.ones(len(h), dtype=np.int64)
        return (np.uint64(1) + h % np.uint64(p - 1)).astype(np.int64)
    return (h % np.uint64(p)).astype(np.int64)


def mc_sift_counts(
    w: int,
    primes: np.ndarray,
    pkeys: np.ndarray,
    tseeds: np.ndarray,
    forbid_zero: bool,
) -> np.ndarray:
    """Survivor counts of [1, w] after sifting all primes, one per trial.

    Residue classes alpha_p are drawn per (trial seed, prime); for p > w the
    window meets the class in at most the single point alpha_p, so no per
    prime scan is needed (the sparse shortcut the naive scan must match).
    """
    w = int(w)
    n = len(tseeds)
    out = np.zeros(n, dtype=np.uint32)
    if w <= 0:
        return out
    for s in range(0, n, _TRIAL_CHUNK):
        ts = tseeds[s : s + _TRIAL_CHUNK]
        m = len(ts)
        alive = np.ones((m, w), dtype=bool)
        rows = np.arange(m)
        for i in range(len(primes)):
            p = int(primes[i])
            a = _residues_for_trials(ts, int(pkeys[i]), p, forbid_zero)
            if p <= w:
                pos = np.where(a >= 1, a, p)
                for step in range(w // p + 1):
                    cur = pos + step * p
                    sel = cur <= w
                    if not sel.any():
                        break
                    alive[rows[sel], cur[sel] - 1] = False
            else:
                sel = (a >= 1) & (a <= w)
                alive[rows[sel], a[sel] - 1] = False
        out[s : s + _TRIAL_CHUNK] = alive.sum(axis=1)
    return out


def mc_trace_counts(
    w: int,
    primes: np.ndarray,
    n_prefix: int,
    pkeys: np.ndarray,
    tseeds: np.ndarray,
    forbid_zero: bool,
) -> np.ndarray:
    """Survivor-count trajectories S_{p_j} across trials.

    primes[:n_prefix] form the prefix sieve (everything up to the trace
    start); column 0 records the count after the prefix, column j >= 1 the
    count after primes[n_prefix + j - 1].
    """
    w = int(w)
    n_prefix = int(n_prefix)
    n = len(tseeds)
    n_steps = len(primes) - n_prefix
    out = np.zeros((n, n_steps + 1), dtype=np.uint32)
    if w <= 0:
        return out
    for s in range(0, n, _TRIAL_CHUNK):
        ts = tseeds[s : s + _TRIAL_CHUNK]
        m = len(ts)
        alive = np.ones((m, w), dtype=bool)
        cnt = np.full(m, w, dtype=np.int64)
        rows = np.arange(m)

        def kill(r: np.ndarray, pos: np.ndarray) -> None:
            was = alive[r, pos - 1]
            alive[r[was], pos[was] - 1] = False
            np.subtract.at(cnt, r[was], 1)

        if n_prefix == 0:
            out[s : s + m, 0] = cnt
        for i in range(len(primes)):
            p = int(primes[i])
            a = _residues_for_trials(ts, int(pkeys[i]), p, forbid_zero)
            if p <= w:
                pos = np.where(a >= 1, a, p)
                for step in range(w // p + 1):
                    cur = pos + step * p
                    sel = cur <= w
                    if not sel.any():
                        break
                    kill(rows[sel], cur[sel])
            else:
                sel = (a >= 1) & (a <= w)
                kill(rows[sel], a[sel])
            if i >= n_prefix - 1:
                out[s : s + m, i - n_prefix + 1] = cnt
    return out


def window_count_hist(elements: np.ndarray, x: int, w: int) -> np.ndarray:
    """hist[c] = #{1 <= n <= x : |[n+1, n+w] cap elements| = c}.

    elements must be sorted and cover membership through x + w.  Runs in
    chunks of n with a difference-array sweep (element e lands in windows
    n in [e-w, e-1]).
    """
    x = int(x)
    w = int(w)
    hist = np.zeros(max(w + 1, 1), dtype=np.int64)
    if x <= 0:
        return hist
    if w <= 0:
        hist[0] = x
        return hist
    chunk = 1 << 22
    for a in range(1, x + 1, chunk):
        b = min(a + chunk - 1, x)
        m = b - a + 1
        lo_i = np.searchsorted(elements, a + 1, side="left")
        hi_i = np.searchsorted(elements, b + w, side="right")
        es = elements[lo_i:hi_i]
        diff = np.zeros(m + 1, dtype=np.int32)
        los = np.maximum(es - w, a) - a
        his = np.minimum(es - 1, b) - a
        np.add.at(diff, los, 1)
        np.add.at(diff, his + 1, -1)
        counts = np.cumsum(diff[:-1], dtype=np.int32)
        part = np.bincount(counts, minlength=w + 1)
        hist[: len(part)] += part
    return hist


def rough_min_window(primes: np.ndarray, y: int) -> tuple[int, int]:
    """(min, argmin) of #{x < n <= x+y : p | n => p > z} over x in [0, P).

    P is the product of the given primes (the full CRT period); the argmin
    is the smallest offset attaining the minimum.
    """
    y = int(y)
    period = 1
    for p in primes:
        period *= int(p)
    best = y + 1
    best_x = 0
    chunk = 1 << 20
    for a in range(0, period, chunk):
        b = min(a + chunk, period)
        lo, hi = a + 1, b + y
        m = hi - lo + 1
        alive = np.ones(m, dtype=np.uint8)
        for p in primes:
            p = int(p)
            first = ((lo + p - 1) // p) * p
            if first <= hi:
                alive[first - lo :: p] = 0
        c = np.zeros(m + 1, dtype=np.int32)
        c[1:] = np.cumsum(alive, dtype=np.int32)
        win = (c[y:] - c[: m + 1 - y])[: b - a]
        j = int(np.argmin(win))
        if int(win[j]) < best:
            best = int(win[j])
            best_x = a + j
    return best, best_x
