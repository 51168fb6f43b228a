"""Counter-based deterministic randomness shared by every stochastic module.

All random draws in the package are pure functions of (master seed, stream
tag, counter).  A draw never consumes hidden generator state, so

  * residues for a prime p depend only on (seed, p) and replay exactly under
    conditioning or sparse shortcuts,
  * per-trial seeds depend only on (seed, trial index), which makes Monte
    Carlo results independent of how trials are partitioned across workers,
  * the compiled kernel and the pure-python kernel can reproduce each other
    bit for bit.

The mixer is the splitmix64 finalizer.  Stream tags are fixed 64-bit
constants (hex digits of pi, nothing up the sleeve) that keep draws from
different uses of the same counter uncorrelated.
"""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15

STREAM_RESIDUE = 0x243F6A8885A308D3  # residue draw for a prime
STREAM_TRIAL = 0x13198A2E03707344  # per-trial master seeds
STREAM_INCLUDE = 0xA4093822299F31D0  # per-integer inclusion draws (Cramer model)
STREAM_SUBSET = 0x082EFA98EC4E6C89  # tuple sampling (Gallagher averages)
STREAM_WALK = 0x452821E638D01377  # concentration walk generators

_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB


def mix64(z: int) -> int:
    """splitmix64 finalizer on a 64-bit word."""
    z &= MASK64
    z = (z ^ (z >> 30)) * _M1 & MASK64
    z = (z ^ (z >> 27)) * _M2 & MASK64
    return z ^ (z >> 31)


def mix64_vec(z: np.ndarray) -> np.ndarray:
    """Vectorized splitmix64 finalizer over a uint64 array."""
    z = z.astype(np.uint64, copy=True)
    z ^= z >> np.uint64(30)
    z *= np.uint64(_M1)
    z ^= z >> np.uint64(27)
    z *= np.uint64(_M2)
    z ^= z >> np.uint64(31)
    return z


def stream_key(stream: int, counter: int) -> int:
    return mix64((counter * GOLDEN ^ stream) & MASK64)


def stream_key_vec(stream: int, counters: np.ndarray) -> np.ndarray:
    c = counters.astype(np.uint64, copy=False)
    return mix64_vec(c * np.uint64(GOLDEN) ^ np.uint64(stream))


def draw(seed: int, stream: int, counter: int) -> int:
    """Deterministic 64-bit draw for (seed, stream, counter)."""
    return mix64(seed ^ stream_key(stream, counter))


def draw_vec(seed: int, stream: int, counters: np.ndarray) -> np.ndarray:
    return mix64_vec(np.uint64(seed & MASK64) ^ stream_key_vec(stream, counters))


def uniform01_vec(seed: int, stream: int, counters: np.ndarray) -> np.ndarray:
    """Uniform doubles in [0, 1) from 53 high bits of the draw."""
    u = draw_vec(seed, stream, counters)
    return (u >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))


def residue(seed: int, p: int, forbid_zero: bool = False) -> int:
    """Residue alpha_p, uniform on [0, p-1], or on [1, p-1] if forbid_zero."""
    h = draw(seed, STREAM_RESIDUE, p)
    if forbid_zero:
        return 1 + h % (p - 1) if p > 2 else 1
    return h % p


def residues_vec(seed: int, ps: np.ndarray, forbid_zero: bool = False) -> np.ndarray:
    """Vectorized residue(seed, p) over an array of primes; returns int64."""
    ps_u = ps.astype(np.uint64, copy=False)
    h = draw_vec(seed, STREAM_RESIDUE, ps_u)
    if forbid_zero:
        # p = 2 has the single admissible residue 1
        denom = np.where(ps_u > 2, ps_u - np.uint64(1), np.uint64(1))
        out = np.uint64(1) + h % denom
        out = np.where(ps_u > 2, out, np.uint64(1))
    else:
        out = h % ps_u
    return out.astype(np.int64)


def prime_keys(ps: np.ndarray) -> np.ndarray:
    """stream_key(STREAM_RESIDUE, p) per prime, precomputed for kernels."""
    return stream_key_vec(STREAM_RESIDUE, ps.astype(np.uint64, copy=False))


def trial_seed(master: int, trial: int) -> int:
    return draw(master, STREAM_TRIAL, trial)


def trial_seeds_vec(master: int, trials: np.ndarray) -> np.ndarray:
    return draw_vec(master, STREAM_TRIAL, trials)
