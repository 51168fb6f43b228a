"""Random sieve models: sifted windows, Cramer and random-sieve integer sets,
Monte Carlo window statistics, and martingale traces of survivor counts.

The underlying randomness is one residue alpha_p per prime p, uniform on
[0, p-1] (or [1, p-1] when zero is forbidden), derived counter-based from
(master seed, p) so that every construction replays exactly.  The window
model sifts [1, floor(y)] by the classes alpha_p mod p for p <= z; the
integer-set model R keeps n >= 8 iff n survives all p <= z(n) with z the
Mertens cutoff, all primes sharing one assignment.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels, parallel, seeds
from .params import min_n_with_cutoff_at_least, prime_array, sieve_cutoff_z
from .primes import IntegerSet


@dataclass(frozen=True)
class ResidueAssignment:
    """One residue per prime p <= z, a pure function of (master_seed, p)."""

    z: float
    master_seed: int
    forbid_zero: bool
    primes: np.ndarray
    alphas: np.ndarray

    def residue(self, p: int) -> int:
        i = int(np.searchsorted(self.primes, p))
        if i >= len(self.primes) or self.primes[i] != p:
            raise ValueError(f"prime {p} not covered by this assignment (z={self.z})")
        return int(self.alphas[i])


def sample_residues(z: float, seed: int, forbid_zero: bool = False) -> ResidueAssignment:
    if z < 2:
        raise ValueError(f"sample_residues requires z >= 2, got {z}")
    ps = prime_array(int(z))
    alphas = seeds.residues_vec(seed, ps, forbid_zero)
    return ResidueAssignment(float(z), int(seed), bool(forbid_zero), ps, alphas)


@dataclass(frozen=True)
class SievedWindow:
    y: float
    z: float
    survivors: np.ndarray
    count: int


def sift_window(
    y: float, z: float, assignment: ResidueAssignment, use_sparse: bool = True
) -> SievedWindow:
    """Survivors of [1, floor(y)] after removing alpha_p mod p for all p <= z.

    For p > floor(y) the window meets the class in at most the point
    alpha_p itself, so those primes are handled without a scan; setting
    use_sparse=False forces the naive per-prime scan (they must agree).
    """
    if y < 1:
        raise ValueError(f"sift_window requires y >= 1, got {y}")
    if z < 2 or z > assignment.z:
        raise ValueError(f"need 2 <= z <= assignment.z, got z={z}")
    w = math.floor(y)
    upto = int(np.searchsorted(assignment.primes, int(z), side="right"))
    ps = assignment.primes[:upto]
    alphas = assignment.alphas[:upto]
    alive = np.ones(w + 1, dtype=bool)
    alive[0] = False
    n_small = int(np.searchsorted(ps, w, side="right")) if use_sparse else len(ps)
    for i in range(n_small):
        p, a = int(ps[i]), int(alphas[i])
        start = a if a >= 1 else p
        if start <= w:
            alive[start::p] = False
    if use_sparse and n_small < len(ps):
        a_big = alphas[n_small:]
        hits = a_big[(a_big >= 1) & (a_big <= w)]
        alive[hits] = False
    survivors = np.flatnonzero(alive).astype(np.int64)
    return SievedWindow(float(y), float(z), survivors, int(len(survivors)))


def cramer_sample(x_max: float, seed: int) -> IntegerSet:
    """Cramer model: include each n >= 3 independently with probability 1/log n."""
    xf = math.floor(x_max)
    if xf < 3:
        raise ValueError(f"cramer_sample requires x_max >= 3, got {x_max}")
    parts = []
    chunk = 1 << 22
    for lo in range(3, xf + 1, chunk):
        hi = min(lo + chunk - 1, xf)
        n = np.arange(lo, hi + 1, dtype=np.int64)
        u = seeds.uniform01_vec(seed, seeds.STREAM_INCLUDE, n.astype(np.uint64))
        parts.append(n[u * np.log(n.astype(np.float64)) < 1.0])
    return IntegerSet(np.concatenate(parts), "model-sample", coverage=xf)


def bft_sample(x_max: float, seed: int) -> IntegerSet:
    """Random sieve set R: n >= 8 survives iff n is missed by alpha_p mod p
    for every p <= z(n), with one shared residue assignment.

    Marking starts, for each prime p, at the smallest n whose cutoff z(n)
    reaches p, which replays the definition n-by-n exactly.
    """
    xf = math.floor(x_max)
    if xf < 8:
        raise ValueError(f"bft_sample requires x_max >= 8, got {x_max}")
    z_top = sieve_cutoff_z(xf)
    assignment = sample_residues(z_top, seed)
    alive = np.ones(xf - 7, dtype=bool)  # index i is the integer 8 + i
    for p, a in zip(assignment.primes, assignment.alphas):
        p, a = int(p), int(a)
        start = max(8, min_n_with_cutoff_at_least(p))
        first = start + (a - start) % p
        if first <= xf:
            alive[first - 8 :: p] = False
    return IntegerSet(
        (np.flatnonzero(alive) + 8).astype(np.int64), "model-sample", coverage=xf
    )


@dataclass(frozen=True)
class MonteCarloEstimate:
    y: float
    z: float
    k: int
    trials: int
    seed: int
    forbid_zero: bool
    p_hat: float
    stderr: float


def monte_carlo_counts(
    y: float, z: float, trials: int, seed: int, forbid_zero: bool = False
) -> np.ndarray:
    """Survivor counts S_z of [1, floor(y)] for per-trial assignments.

    Trial t uses the residue assignment of trial_seed(seed, t), so results
    do not depend on how trials are blocked across workers.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if y < 1 or z < 2:
        raise ValueError(f"need y >= 1 and z >= 2, got y={y}, z={z}")
    w = math.floor(y)
    ps = prime_array(int(z))
    pkeys = seeds.prime_keys(ps)
    out = np.zeros(trials, dtype=np.uint32)

    def run_block(block: tuple[int, int]) -> tuple[int, np.ndarray]:
        s, e = block
        tseeds = seeds.trial_seeds_vec(seed, np.arange(s, e, dtype=np.uint64))
        return s, kernels.mc_sift_counts(w, ps, pkeys, tseeds, forbid_zero)

    for s, res in parallel.map_ordered(run_block, parallel.trial_blocks(trials)):
        out[s : s + len(res)] = res
    return out


def monte_carlo_window(
    y: float, z: float, k: int, trials: int, seed: int, forbid_zero: bool = False
) -> MonteCarloEstimate:
    """Estimate P(S_z = k) for the sifted window with a binomial stderr."""
    if k < 0:
        raise ValueError(f"k must be >= 0, got {k}")
    if k > math.floor(y):
        return MonteCarloEstimate(y, z, k, trials, seed, forbid_zero, 0.0, 0.0)
    counts = monte_carlo_counts(y, z, trials, seed, forbid_zero)
    p_hat = float(np.count_nonzero(counts == k)) / trials
    stderr = math.sqrt(p_hat * (1.0 - p_hat) / trials)
    return MonteCarloEstimate(y, z, k, trials, seed, forbid_zero, p_hat, stderr)


def _trace_norms(trace_primes: np.ndarray, normalization: str) -> np.ndarray:
    pf = trace_primes.astype(np.float64)
    if normalization == "theta":
        steps = 1.0 - 1.0 / pf
    elif normalization == "theta_hat":
        if len(pf) and trace_primes[0] <= 2:
            raise ValueError("theta_hat normalization needs trace primes > 2")
        steps = 1.0 - 1.0 / (pf - 1.0)
    else:
        raise ValueError(f"unknown normalization {normalization!r}")
    out = np.ones(len(pf) + 1)
    np.cumprod(steps, out=out[1:])
    return out


@dataclass(frozen=True)
class MartingaleTrace:
    """Normalized survivor-count trajectory over the primes in (w1, w2].

    values[j] = counts[j] / prod-of-normalization-steps, with values[0] the
    survivor count after sifting all p <= w1.  Under theta normalization
    (unrestricted residues) the values are a martingale in j; under
    theta_hat with zero forbidden they are a submartingale.
    """

    y: float
    w1: float
    w2: float
    seed: int
    normalization: str
    forbid_zero: bool
    trace_primes: np.ndarray
    counts: np.ndarray
    values: np.ndarray


def martingale_trace(
    y: float,
    w1: float,
    w2: float,
    seed: int,
    normalization: str = "theta",
    forbid_zero: bool | None = None,
) -> MartingaleTrace:
    """Single trace X_j for the assignment drawn from the master seed.

    forbid_zero defaults to the pairing used in the analysis: True for
    theta_hat, False for theta.
    """
    if not (1 <= w1 < w2):
        raise ValueError(f"need 1 <= w1 < w2, got w1={w1}, w2={w2}")
    if y < 1:
        raise ValueError(f"martingale_trace requires y >= 1, got {y}")
    if forbid_zero is None:
        forbid_zero = normalization == "theta_hat"
    assignment = sample_residues(w2, seed, forbid_zero)
    ps = assignment.primes
    n_prefix = int(np.searchsorted(ps, math.floor(w1), side="right"))
    trace_primes = ps[n_prefix:]
    norms = _trace_norms(trace_primes, normalization)
    w = math.floor(y)
    alive = np.ones(w + 1, dtype=bool)
    alive[0] = False
    counts = np.zeros(len(trace_primes) + 1, dtype=np.int64)

    def kill(p: int, a: int) -> None:
        if p <= w:
            start = a if a >= 1 else p
            if start <= w:
                alive[start::p] = False
        elif 1 <= a <= w:
            alive[a] = False

    for i in range(n_prefix):
        kill(int(ps[i]), int(assignment.alphas[i]))
    counts[0] = int(np.count_nonzero(alive))
    for j, i in enumerate(range(n_prefix, len(ps)), start=1):
        kill(int(ps[i]), int(assignment.alphas[i]))
        counts[j] = int(np.count_nonzero(alive))
    return MartingaleTrace(
        float(y),
        float(w1),
        float(w2),
        int(seed),
        normalization,
        bool(forbid_zero),
        trace_primes,
        counts,
        counts / norms,
    )


def martingale_trace_ensemble(
    y: float,
    w1: float,
    w2: float,
    trials: int,
    master_seed: int,
    normalization: str = "theta",
    forbid_zero: bool | None = None,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(values, counts, trace_primes) across trials; trial t is exactly
    martingale_trace(..., seed=trial_seed(master_seed, t))."""
    if not (1 <= w1 < w2):
        raise ValueError(f"need 1 <= w1 < w2, got w1={w1}, w2={w2}")
    if forbid_zero is None:
        forbid_zero = normalization == "theta_hat"
    w = math.floor(y)
    ps = prime_array(int(w2))
    n_prefix = int(np.searchsorted(ps, math.floor(w1), side="right"))
    trace_primes = ps[n_prefix:]
    norms = _trace_norms(trace_primes, normalization)
    pkeys = seeds.prime_keys(ps)
    counts = np.zeros((trials, len(trace_primes) + 1), dtype=np.uint32)

    def run_block(block: tuple[int, int]) -> tuple[int, np.ndarray]:
        s, e = block
        tseeds = seeds.trial_seeds_vec(master_seed, np.arange(s, e, dtype=np.uint64))
        return s, kernels.mc_trace_counts(w, ps, n_prefix, pkeys, tseeds, forbid_zero)

    for s, res in parallel.map_ordered(run_block, parallel.trial_blocks(trials)):
        counts[s : s + len(res)] = res
    return counts / norms[np.newaxis, :], counts, trace_primes


def write_monte_carlo_csv(estimates, path) -> None:
    """Write MonteCarloEstimate rows as y, z, k, trials, estimate, stderr, seed."""
    with open(path, "w") as fh:
        fh.write("y,z,k,trials,estimate,stderr,seed\n")
        for e in estimates:
            fh.write(
                "%.12g,%.12g,%d,%d,%.12g,%.12g,%d\n"
                % (e.y, e.z, e.k, e.trials, e.p_hat, e.stderr, e.seed)
            )
