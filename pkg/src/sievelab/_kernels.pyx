# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled twins of the hot kernels in sievelab._kernels_py.

Same four functions, same signatures, bit-for-bit identical outputs; the
test suite enforces the parity whenever this extension is importable.
Keep logic changes mirrored in _kernels_py.py.
"""

import numpy as np

cimport numpy as cnp
from libc.stdlib cimport free, malloc
from libc.string cimport memset

cnp.import_array()

ctypedef unsigned long long u64


cdef inline u64 mix64(u64 z) nogil:
    # splitmix64 finalizer, the only randomness primitive the kernels need
    z ^= z >> 30
    z *= 0xBF58476D1CE4E5B9ULL
    z ^= z >> 27
    z *= 0x94D049BB133111EBULL
    z ^= z >> 31
    return z


cdef inline long _residue(u64 tseed, u64 pkey, long p, bint forbid_zero) nogil:
    cdef u64 h = mix64(tseed ^ pkey)
    if forbid_zero:
        if p == 2:
            return 1
        return <long> (1 + h % <u64> (p - 1))
    return <long> (h % <u64> p)


def mc_sift_counts(w, primes, pkeys, tseeds, forbid_zero):
    """Survivor counts of [1, w] after sifting all primes, one per trial."""
    cdef long wl = int(w)
    cdef cnp.int64_t[::1] ps = np.ascontiguousarray(primes, dtype=np.int64)
    cdef cnp.uint64_t[::1] keys = np.ascontiguousarray(pkeys, dtype=np.uint64)
    cdef cnp.uint64_t[::1] ts = np.ascontiguousarray(tseeds, dtype=np.uint64)
    cdef Py_ssize_t n = ts.shape[0]
    cdef Py_ssize_t n_p = ps.shape[0]
    out = np.zeros(n, dtype=np.uint32)
    cdef cnp.uint32_t[::1] ov = out
    if wl <= 0 or n == 0:
        return out
    cdef unsigned char* alive = <unsigned char*> malloc(wl)
    if alive == NULL:
        raise MemoryError()
    cdef Py_ssize_t t, i
    cdef long p, a, pos, cnt
    cdef bint fz = bool(forbid_zero)
    try:
        with nogil:
            for t in range(n):
                memset(alive, 1, wl)
                for i in range(n_p):
                    p = <long> ps[i]
                    a = _residue(ts[t], keys[i], p, fz)
                    if p <= wl:
                        pos = a if a >= 1 else p
                        while pos <= wl:
                            alive[pos - 1] = 0
                            pos += p
                    elif 1 <= a <= wl:
                        alive[a - 1] = 0
                cnt = 0
                for pos in range(wl):
                    cnt += alive[pos]
                ov[t] = <cnp.uint32_t> cnt
    finally:
        free(alive)
    return out


def mc_trace_counts(w, primes, n_prefix, pkeys, tseeds, forbid_zero):
    """Survivor-count trajectories S_{p_j} across trials.

    Column 0 records the count after primes[:n_prefix], column j >= 1 the
    count after primes[n_prefix + j - 1].
    """
    cdef long wl = int(w)
    cdef Py_ssize_t pre = int(n_prefix)
    cdef cnp.int64_t[::1] ps = np.ascontiguousarray(primes, dtype=np.int64)
    cdef cnp.uint64_t[::1] keys = np.ascontiguousarray(pkeys, dtype=np.uint64)
    cdef cnp.uint64_t[::1] ts = np.ascontiguousarray(tseeds, dtype=np.uint64)
    cdef Py_ssize_t n = ts.shape[0]
    cdef Py_ssize_t n_p = ps.shape[0]
    out = np.zeros((n, n_p - pre + 1), dtype=np.uint32)
    cdef cnp.uint32_t[:, ::1] ov = out
    if wl <= 0 or n == 0:
        return out
    cdef unsigned char* alive = <unsigned char*> malloc(wl)
    if alive == NULL:
        raise MemoryError()
    cdef Py_ssize_t t, i
    cdef long p, a, pos, cnt
    cdef bint fz = bool(forbid_zero)
    try:
        with nogil:
            for t in range(n):
                memset(alive, 1, wl)
                cnt = wl
                if pre == 0:
                    ov[t, 0] = <cnp.uint32_t> cnt
                for i in range(n_p):
                    p = <long> ps[i]
                    a = _residue(ts[t], keys[i], p, fz)
                    if p <= wl:
                        pos = a if a >= 1 else p
                        while pos <= wl:
                            if alive[pos - 1]:
                                alive[pos - 1] = 0
                                cnt -= 1
                            pos += p
                    elif 1 <= a <= wl:
                        if alive[a - 1]:
                            alive[a - 1] = 0
                            cnt -= 1
                    if i >= pre - 1:
                        ov[t, i - pre + 1] = <cnp.uint32_t> cnt
    finally:
        free(alive)
    return out


def window_count_hist(elements, x, w):
    """hist[c] = #{1 <= n <= x : |[n+1, n+w] cap elements| = c}.

    Two-pointer sweep over sorted elements; same counts as the
    difference-array version in _kernels_py.
    """
    cdef long xl = int(x)
    cdef long wl = int(w)
    cdef cnp.int64_t[::1] els = np.ascontiguousarray(elements, dtype=np.int64)
    hist = np.zeros(max(wl + 1, 1), dtype=np.int64)
    cdef cnp.int64_t[::1] hv = hist
    if xl <= 0:
        return hist
    if wl <= 0:
        hist[0] = xl
        return hist
    cdef Py_ssize_t ne = els.shape[0]
    cdef Py_ssize_t lo = 0, hi = 0
    cdef long n
    with nogil:
        for n in range(1, xl + 1):
            # lo: first index past n; hi: first index past n + w
            while lo < ne and els[lo] <= n:
                lo += 1
            while hi < ne and els[hi] <= n + wl:
                hi += 1
            hv[hi - lo] += 1
    return hist


def rough_min_window(primes, y):
    """(min, argmin) of #{x < n <= x+y : p | n => p > z} over x in [0, P)."""
    cdef cnp.int64_t[::1] ps = np.ascontiguousarray(primes, dtype=np.int64)
    cdef long yl = int(y)
    cdef Py_ssize_t n_p = ps.shape[0]
    cdef long long period = 1
    cdef Py_ssize_t i
    for i in range(n_p):
        period *= ps[i]
    cdef long long best = yl + 1
    cdef long long best_x = 0
    cdef long long chunk = 1 << 20
    cdef long long a, b, lo, hi, first, j
    cdef long m, idx, cur, p
    cdef unsigned char* buf = <unsigned char*> malloc(chunk + yl)
    if buf == NULL:
        raise MemoryError()
    try:
        with nogil:
            a = 0
            while a < period:
                b = a + chunk
                if b > period:
                    b = period
                lo = a + 1
                hi = b + yl
                m = <long> (hi - lo + 1)
                memset(buf, 1, m)
                for i in range(n_p):
                    p = <long> ps[i]
                    first = ((lo + p - 1) // p) * p
                    idx = <long> (first - lo)
                    while idx < m:
                        buf[idx] = 0
                        idx += p
                cur = 0
                for idx in range(yl):
                    cur += buf[idx]
                for j in range(b - a):
                    if cur < best:
                        best = cur
                        best_x = a + j
                    cur += buf[j + yl] - buf[j]
                a += chunk
    finally:
        free(buf)
    return int(best), int(best_x)
