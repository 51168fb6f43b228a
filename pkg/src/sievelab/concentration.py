"""Azuma-type tail bounds and empirical verification against simulators.

Two bounds are exposed: the classic Azuma bound exp(-eps^2 / 2 sum c_i^2)
for martingales with |X_{i+1} - X_i| <= c_i, and the generalized variant
2 exp(-t^2 / 8 sum c_i^2) for near-martingales whose conditional drift
sits in [0, d_i], valid once t > 2 sum d_i.  Bounds are returned raw,
clamping to 1 is the caller's business; keeping the formula value makes
cross-checks against the closed forms exact.

The generators produce adapted sequences honoring a declared increment
profile, so their empirical tail frequencies must stay below the bounds
(up to binomial noise); a violation is evidence of an implementation bug,
never of the inequality failing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .models import _trace_norms, martingale_trace_ensemble
from .params import prime_array
from .seeds import MASK64, STREAM_WALK, mix64_vec, stream_key_vec, trial_seeds_vec

_TRIAL_CHUNK = 8192


@dataclass(frozen=True)
class IncrementProfile:
    """Per-step increment bounds c_i and drift allowances d_i (all >= 0)."""

    c: np.ndarray
    d: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "c", np.asarray(self.c, dtype=np.float64))
        object.__setattr__(self, "d", np.asarray(self.d, dtype=np.float64))
        if self.c.shape != self.d.shape or self.c.ndim != 1:
            raise ValueError("c and d must be 1-d sequences of equal length")
        if np.any(self.c < 0) or np.any(self.d < 0):
            raise ValueError("increment bounds and drifts must be >= 0")

    @classmethod
    def driftless(cls, c) -> "IncrementProfile":
        c = np.asarray(c, dtype=np.float64)
        return cls(c, np.zeros_like(c))

    @property
    def sum_c_sq(self) -> float:
        return float(np.sum(self.c**2))

    @property
    def sum_d(self) -> float:
        return float(np.sum(self.d))


def azuma_bound(eps: float, profile: IncrementProfile, sided: str = "one") -> float:
    """exp(-eps^2 / (2 sum c_i^2)), doubled when two-sided; returned raw."""
    if eps < 0:
        raise ValueError(f"azuma_bound requires eps >= 0, got {eps}")
    if sided not in ("one", "two"):
        raise ValueError(f"sided must be 'one' or 'two', got {sided!r}")
    if np.any(profile.d != 0):
        raise ValueError("azuma_bound needs an all-zero drift profile; "
                         "use generalized_azuma_bound")
    s = profile.sum_c_sq
    if s == 0.0:
        base = 1.0 if eps == 0 else 0.0
    else:
        base = math.exp(-(eps**2) / (2.0 * s))
    return 2.0 * base if sided == "two" else base


def generalized_azuma_bound(t: float, profile: IncrementProfile) -> float:
    """2 exp(-t^2 / (8 sum c_i^2)) for t > 2 sum d_i; returned raw."""
    two_d = 2.0 * profile.sum_d
    if t <= two_d:
        raise ValueError(
            f"generalized bound needs t > 2 sum d = {two_d}, got t = {t}"
        )
    s = profile.sum_c_sq
    if s == 0.0:
        return 2.0 if t <= 0 else 0.0
    return 2.0 * math.exp(-(t**2) / (8.0 * s))


def _walk_deviations(
    n: int, trials: int, seed: int, p_up: np.ndarray, step: float = 1.0
) -> np.ndarray:
    """Final-minus-initial values of +-step walks, P(up at i) = p_up[i]."""
    skeys = stream_key_vec(STREAM_WALK, np.arange(n, dtype=np.uint64))
    out = np.empty(trials, dtype=np.float64)
    for s in range(0, trials, _TRIAL_CHUNK):
        e = min(s + _TRIAL_CHUNK, trials)
        ts = trial_seeds_vec(seed & MASK64, np.arange(s, e, dtype=np.uint64))
        bits = mix64_vec(ts[:, None] ^ skeys[None, :])
        u01 = (bits >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))
        inc = np.where(u01 < p_up[None, :], step, -step)
        out[s:e] = inc.sum(axis=1)
    return out


class FairWalk:
    """n-step +-1 walk with fair signs; the textbook Azuma test case."""

    def __init__(self, n: int):
        if n < 1:
            raise ValueError(f"FairWalk requires n >= 1, got {n}")
        self.n = int(n)

    def profile(self) -> IncrementProfile:
        return IncrementProfile.driftless(np.ones(self.n))

    def deviations(self, trials: int, seed: int) -> np.ndarray:
        return _walk_deviations(self.n, trials, seed, np.full(self.n, 0.5))


class DriftedWalk:
    """n-step +-1 walk with P(up) = (1 + d_i)/2, conditional drift d_i."""

    def __init__(self, n: int, drift):
        self.n = int(n)
        d = np.broadcast_to(np.asarray(drift, dtype=np.float64), (self.n,)).copy()
        if np.any(d < 0) or np.any(d > 1):
            raise ValueError("per-step drift must lie in [0, 1]")
        self.drift = d

    def profile(self) -> IncrementProfile:
        return IncrementProfile(np.ones(self.n), self.drift)

    def deviations(self, trials: int, seed: int) -> np.ndarray:
        return _walk_deviations(self.n, trials, seed, (1.0 + self.drift) / 2.0)


class SieveTraceGenerator:
    """Window-survivor martingale traces as a concentration test subject.

    The analytic profile bounds one sifting step at prime p by the largest
    possible residue-class hit count in the window, ceil(w/p), divided by
    the running normalization; under theta_hat the killed class never
    contains 0 mod p, which caps the conditional drift by the multiples of
    p in the window.  The empirical profile instead takes the max observed
    |X_j - X_{j-1}| over a pilot ensemble; it is NOT an almost-sure bound,
    so it is labeled and kept out of soundness checks.
    """

    def __init__(
        self,
        y: float,
        w1: float,
        w2: float,
        normalization: str = "theta",
        profile_mode: str = "analytic",
        pilot_trials: int = 256,
        pilot_seed: int = 0,
    ):
        if profile_mode not in ("analytic", "empirical"):
            raise ValueError(f"unknown profile_mode {profile_mode!r}")
        self.y, self.w1, self.w2 = float(y), float(w1), float(w2)
        self.normalization = normalization
        self.profile_mode = profile_mode
        self.pilot_trials = pilot_trials
        self.pilot_seed = pilot_seed
        ps = prime_array(int(w2))
        n_prefix = int(np.searchsorted(ps, math.floor(w1), side="right"))
        self.trace_primes = ps[n_prefix:]
        self._norms = _trace_norms(self.trace_primes, normalization)

    def profile(self) -> IncrementProfile:
        w = math.floor(self.y)
        pf = self.trace_primes.astype(np.float64)
        hit_cap = np.ceil(w / pf)
        if self.normalization == "theta_hat":
            c = np.maximum(w / (pf - 1.0), hit_cap) / self._norms[1:]
            d = np.floor(w / pf) / ((pf - 1.0) * self._norms[1:])
        else:
            c = hit_cap / self._norms[1:]
            d = np.zeros_like(c)
        if self.profile_mode == "empirical":
            values, _, _ = martingale_trace_ensemble(
                self.y, self.w1, self.w2, self.pilot_trials, self.pilot_seed,
                self.normalization,
            )
            c = np.abs(np.diff(values, axis=1)).max(axis=0)
        return IncrementProfile(c, d)

    def deviations(self, trials: int, seed: int) -> np.ndarray:
        values, _, _ = martingale_trace_ensemble(
            self.y, self.w1, self.w2, trials, seed, self.normalization
        )
        return values[:, -1] - values[:, 0]


@dataclass(frozen=True)
class TailCheckReport:
    bound: float
    frequency: float
    trials: int
    threshold: float
    sided: str
    kind: str  # "azuma" | "generalized"
    stderr: float
    violation: bool

    @property
    def verdict(self) -> str:
        return "violation" if self.violation else "ok"

    def to_json(self) -> str:
        return json.dumps(
            {
                "bound": self.bound,
                "frequency": self.frequency,
                "trials": self.trials,
                "threshold": self.threshold,
                "sided": self.sided,
                "kind": self.kind,
                "stderr": self.stderr,
                "verdict": self.verdict,
            }
        )


def empirical_tail_check(
    generator, threshold: float, trials: int, seed: int, sided: str = "two"
) -> TailCheckReport:
    """Deviation frequency of a generator versus its applicable bound.

    Picks the classic bound when the declared profile is driftless and the
    generalized bound otherwise (which is inherently two-sided).  Flags a
    violation only when the frequency exceeds the bound by more than five
    binomial standard errors; for a generator honoring its profile that
    must never happen.
    """
    profile = generator.profile()
    driftless = not np.any(profile.d != 0)
    if driftless:
        bound = azuma_bound(threshold, profile, sided)
        kind = "azuma"
    else:
        if sided != "two":
            raise ValueError("the generalized bound is two-sided only")
        bound = generalized_azuma_bound(threshold, profile)
        kind = "generalized"
    devs = generator.deviations(trials, seed)
    hits = devs >= threshold if sided == "one" else np.abs(devs) >= threshold
    freq = float(np.count_nonzero(hits)) / trials
    p = min(bound, 1.0)
    se = math.sqrt(p * (1.0 - p) / trials)
    return TailCheckReport(
        bound=float(bound),
        frequency=freq,
        trials=int(trials),
        threshold=float(threshold),
        sided=sided,
        kind=kind,
        stderr=se,
        violation=bool(freq > bound + 5.0 * se),
    )
