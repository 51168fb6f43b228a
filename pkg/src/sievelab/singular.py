"""Singular series of offset tuples and their Gallagher averages.

For a tuple H of k distinct non-negative offsets,

  S(H) = prod_p (1 - nu_H(p)/p) * (1 - 1/p)^(-k),

with nu_H(p) = |H mod p|.  The product vanishes iff some prime p <= k is
covered (nu = p); otherwise every factor with p > diam(H) equals
(1 - k/p)(1 - 1/p)^(-k), whose log expands as -sum_{m>=2} (k^m - k)/(m p^m).
Factors up to a truncation prime are evaluated exactly; the remaining tail
is folded in through prime zeta tails P_m = sum_{p > trunc} p^(-m) for
m = 2..4, leaving a certified relative remainder reported as tail_bound.

Conventions fixed here: sums over k-subsets of {0, ..., floor(y)} with
denominator binom(floor(y)+1, k); the pair sum uses the closed form
S({0,d}) = S2 * prod_{p | d, p > 2} (p-1)/(p-2) for even d, 0 for odd d.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import seeds
from .params import prime_array

DEFAULT_TRUNC_FLOOR = 10**4
EXHAUSTIVE_CAP = 10**7
# per-factor float roundoff allowance folded into tail_bound
_ULP_PER_FACTOR = 8e-16


@dataclass(frozen=True)
class OffsetTuple:
    """Sorted distinct non-negative integer offsets."""

    offsets: tuple[int, ...]

    def __post_init__(self):
        offs = self.offsets
        if len(offs) == 0:
            raise ValueError("offset tuple must be nonempty")
        if any(int(h) != h or h < 0 for h in offs):
            raise ValueError(f"offsets must be non-negative integers: {offs}")
        if any(b <= a for a, b in zip(offs, offs[1:])):
            raise ValueError(f"offsets must be strictly increasing: {offs}")

    @classmethod
    def make(cls, offsets) -> "OffsetTuple":
        return cls(tuple(sorted(int(h) for h in offsets)))

    @classmethod
    def parse(cls, text: str) -> "OffsetTuple":
        return cls.make(int(tok) for tok in text.replace(",", " ").split())

    @property
    def k(self) -> int:
        return len(self.offsets)

    @property
    def diameter(self) -> int:
        return self.offsets[-1] - self.offsets[0]


def read_offset_tuples(path: str | Path) -> list[OffsetTuple]:
    """One tuple per line, comma separated; blank lines and # comments skipped."""
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(OffsetTuple.parse(line))
    return out


def residues_mod(offsets, p: int) -> int:
    """nu_H(p) = number of distinct residues of the tuple mod p."""
    if p < 2:
        raise ValueError(f"residues_mod requires p >= 2, got {p}")
    arr = np.asarray(OffsetTuple.make(offsets).offsets, dtype=np.int64)
    return len(np.unique(arr % p))


@functools.lru_cache(maxsize=None)
def _prime_zeta(m: int) -> float:
    import mpmath

    return float(mpmath.primezeta(m))


@dataclass(frozen=True)
class SingularSeriesValue:
    value: float
    truncation_prime: int
    tail_bound: float
    is_zero: bool


def singular_series(offsets, trunc: int | None = None) -> SingularSeriesValue:
    """S(H) with exact factors through trunc and a certified analytic tail.

    trunc defaults to max(1e4, 10 * diameter) and must be at least
    max(diameter, k) + 1 so that every prime beyond it sees k distinct
    residues.  tail_bound is a relative error bound on value (truncation
    remainder plus a float roundoff allowance); increasing trunc keeps the
    true value inside value * (1 +- tail_bound).
    """
    tup = OffsetTuple.make(offsets)
    h_arr = np.asarray(tup.offsets, dtype=np.int64)
    k = tup.k
    diam = tup.diameter
    if trunc is None:
        trunc = max(DEFAULT_TRUNC_FLOOR, 10 * diam)
    trunc = int(trunc)
    if trunc < max(diam, k) + 1:
        raise ValueError(
            f"trunc={trunc} below exact-regime threshold {max(diam, k) + 1}"
        )
    ps = prime_array(trunc)
    trunc_prime = int(ps[-1])
    cut = max(diam, k)

    log_sum = 0.0
    n_small = int(np.searchsorted(ps, cut, side="right"))
    for p in ps[:n_small]:
        p = int(p)
        nu = len(np.unique(h_arr % p))
        if nu == p:
            return SingularSeriesValue(0.0, trunc_prime, 0.0, True)
        log_sum += math.log1p(-nu / p) - k * math.log1p(-1.0 / p)

    big = ps[n_small:].astype(np.float64)
    if len(big):
        log_sum += float(np.sum(np.log1p(-k / big) - k * np.log1p(-1.0 / big)))

    # tail over p > trunc: nu = k there, log factor = -sum_m (k^m - k)/(m p^m)
    psf = ps.astype(np.float64)
    log_tail = 0.0
    for m in (2, 3, 4):
        p_m = _prime_zeta(m) - float(np.sum(psf**-m))
        log_tail -= (k**m - k) / m * p_m
    p_5 = _prime_zeta(5) - float(np.sum(psf**-5.0))
    remainder = (k**5) * max(p_5, 0.0) / (1.0 - k / trunc_prime)
    value = math.exp(log_sum + log_tail)
    tail_bound = math.expm1(remainder) + len(ps) * _ULP_PER_FACTOR
    return SingularSeriesValue(value, trunc_prime, tail_bound, False)


@functools.lru_cache(maxsize=1)
def twin_prime_constant() -> float:
    """S({0,2}) = 2 prod_{p>2} (1 - 1/(p-1)^2), accurate to ~1e-12."""
    return singular_series((0, 2), trunc=10**6).value


@dataclass(frozen=True)
class GallagherEstimate:
    y: float
    k: int
    mode: str
    value: float
    stderr: float | None
    n_subsets: int


def gallagher_average(
    y: float,
    k: int,
    mode: str = "exhaustive",
    samples: int | None = None,
    seed: int | None = None,
    trunc: int | None = None,
) -> GallagherEstimate:
    """Average of S(H) over k-subsets H of {0, ..., floor(y)}.

    Exhaustive mode enumerates all binom(floor(y)+1, k) subsets (capped at
    1e7); sampled mode draws uniform subsets with the shared seeded
    generator and reports a standard error.  The average tends to 1 as y
    grows with k fixed.
    """
    w = math.floor(y)
    if w < 0 or k < 1:
        raise ValueError(f"gallagher_average requires y >= 0 and k >= 1")
    if k > w + 1:
        raise ValueError(f"k={k} exceeds the {w + 1} available offsets")
    if mode == "exhaustive":
        total_subsets = math.comb(w + 1, k)
        if total_subsets > EXHAUSTIVE_CAP:
            raise ValueError(
                f"{total_subsets} subsets exceed the exhaustive cap {EXHAUSTIVE_CAP}"
            )
        total = 0.0
        for combo in itertools.combinations(range(w + 1), k):
            total += singular_series(combo, trunc).value
        return GallagherEstimate(y, k, mode, total / total_subsets, None, total_subsets)
    if mode == "sampled":
        if not samples or samples < 2:
            raise ValueError("sampled mode needs samples >= 2")
        if seed is None:
            raise ValueError("sampled mode needs an explicit seed")
        rng = np.random.Generator(
            np.random.PCG64(seeds.draw(seed, seeds.STREAM_SUBSET, 0))
        )
        vals = np.empty(samples)
        for i in range(samples):
            combo = np.sort(rng.choice(w + 1, size=k, replace=False))
            vals[i] = singular_series(combo, trunc).value
        mean = float(vals.mean())
        stderr = float(vals.std(ddof=1) / math.sqrt(samples))
        return GallagherEstimate(y, k, mode, mean, stderr, samples)
    raise ValueError(f"unknown mode {mode!r}")


def pair_series_sum(w: float) -> float:
    """sum_{1 <= d <= floor(w)} S({0, d}); equals w + O(log w).

    Odd d contribute 0; even d use the closed pair form with the twin
    prime constant.
    """
    wf = math.floor(w)
    if wf < 1:
        raise ValueError(f"pair_series_sum requires w >= 1, got {w}")
    s2 = twin_prime_constant()
    # smallest-prime-factor table for factoring each even d
    spf = np.zeros(wf + 1, dtype=np.int64)
    for p in range(2, wf + 1):
        if spf[p] == 0:
            spf[p::p][spf[p::p] == 0] = p
    total = 0.0
    for d in range(2, wf + 1, 2):
        g = 1.0
        m = d
        while m > 1:
            q = int(spf[m])
            if q > 2:
                g *= (q - 1) / (q - 2)
            while m % q == 0:
                m //= q
        total += s2 * g
    return total


def write_gallagher_csv(estimates, path) -> None:
    """Write GallagherEstimate rows as y, k, ratio, stderr (blank if exact)."""
    with open(path, "w") as fh:
        fh.write("y,k,ratio,stderr\n")
        for g in estimates:
            se = "" if g.stderr is None else "%.12g" % g.stderr
            fh.write("%.12g,%d,%.12g,%s\n" % (g.y, g.k, g.value, se))
