"""Shared parameter machinery: Mertens products, sieve cutoffs, thresholds.

Everything downstream keys off a handful of slowly varying quantities:

  Theta_z        = prod_{p <= z} (1 - 1/p)
  Theta_{a,b}    = prod_{a < p <= b} (1 - 1/p)
  ThetaHat_{a,b} = prod_{a < p <= b, p > 2} (1 - 1/(p-1))
  z(t)           = largest prime z with prod_{p <= z} (1 - 1/p)^(-1) <= log t
  lambda', lambda'', lambda_0, lambda_k, K_k, x_k   (growth-regime thresholds)

Products are accumulated in log space over a cached prime table so that
ranged products are exact cumulative differences.  The cutoff z(t) is a
nondecreasing step function of t; the defining comparison uses a 1e-9
additive tolerance on the double-log scale so that boundary inputs like
t = e^2 land on the documented side of the tie (ties include the prime).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .sieving import simple_sieve

E_SQUARED = math.exp(2.0)
LOG_TIE_EPS = 1e-9


class _ProductTable:
    """Primes up to a limit with cumulative log-products for fast lookups."""

    def __init__(self, limit: int):
        self.limit = int(limit)
        self.primes = simple_sieve(self.limit)
        pf = self.primes.astype(np.float64)
        # cumulative sum of log(1 - 1/p); theta over a prefix is exp of an entry
        self.log_theta = np.cumsum(np.log1p(-1.0 / pf))
        # hat variant skips p = 2 per definition (its factor would vanish)
        with np.errstate(divide="ignore"):
            hat_terms = np.log1p(-1.0 / (pf - 1.0))
        if len(pf) and self.primes[0] == 2:
            hat_terms[0] = 0.0
        self.log_theta_hat = np.cumsum(hat_terms)

    def index_of(self, z: float) -> int:
        """Index of the largest prime <= z, or -1."""
        return int(np.searchsorted(self.primes, math.floor(z), side="right")) - 1


_TABLE: _ProductTable | None = None


def _table(limit: int = 0) -> _ProductTable:
    global _TABLE
    need = max(int(limit), 1 << 14)
    if _TABLE is None or _TABLE.limit < need:
        grow = 1 << 14
        while grow < need:
            grow <<= 1
        _TABLE = _ProductTable(grow)
    return _TABLE


def prime_array(limit: int) -> np.ndarray:
    """Primes up to limit from the shared cached table (do not mutate)."""
    t = _table(limit)
    return t.primes[: t.index_of(limit) + 1]


def mertens_theta(z: float, hat: bool = False) -> float:
    """Theta_z, or ThetaHat_z = prod_{2 < p <= z} (1 - 1/(p-1)) when hat."""
    if z < 2:
        raise ValueError(f"mertens_theta requires z >= 2, got {z}")
    t = _table(int(z))
    i = t.index_of(z)
    cum = t.log_theta_hat if hat else t.log_theta
    return float(math.exp(cum[i])) if i >= 0 else 1.0


def theta_range(a: float, b: float, hat: bool = False) -> float:
    """Product of (1 - 1/p), or (1 - 1/(p-1)) when hat, over a < p <= b."""
    if a > b:
        raise ValueError(f"theta_range requires a <= b, got a={a}, b={b}")
    if a < 0:
        raise ValueError(f"theta_range requires a >= 0, got {a}")
    t = _table(int(b))
    cum = t.log_theta_hat if hat else t.log_theta
    ia, ib = t.index_of(a), t.index_of(b)
    la = cum[ia] if ia >= 0 else 0.0
    lb = cum[ib] if ib >= 0 else 0.0
    return float(math.exp(lb - la))


@dataclass(frozen=True)
class ThetaProducts:
    """Mertens products attached to a cutoff pair a < b."""

    a: float
    b: float
    theta_b: float
    range_plain: float
    range_hat: float


def theta_products(a: float, b: float) -> ThetaProducts:
    return ThetaProducts(
        a=a,
        b=b,
        theta_b=mertens_theta(b),
        range_plain=theta_range(a, b),
        range_hat=theta_range(a, b, hat=True),
    )


def _cutoff_ok(q: float, loglog_t: float) -> bool:
    # q is log of the reciprocal product; ties include the prime
    return q <= loglog_t + LOG_TIE_EPS


def sieve_cutoff_z(t: float) -> int:
    """Largest prime z with prod_{p <= z} (1 - 1/p)^(-1) <= log t.

    Defined for t >= e^2 (so z = 2 always qualifies).  Nondecreasing step
    function of t; at exact ties the prime is included.
    """
    log_t = math.log(t)
    if log_t < 2.0 - LOG_TIE_EPS:
        raise ValueError(f"sieve_cutoff_z requires t >= e^2, got t={t}")
    target = math.log(log_t)
    # initial table guess from Mertens: log z ~ e^(-gamma) * log t
    t0 = _table(max(1024, int(math.exp(min(log_t / 1.7, 15.0)))))
    while _cutoff_ok(-t0.log_theta[-1], target):
        t0 = _table(t0.limit * 2)
    q = -t0.log_theta  # increasing
    # last index with q[i] <= target (+ tie tolerance); q[0] = log 2 qualifies
    i = int(np.searchsorted(q, target + LOG_TIE_EPS, side="right")) - 1
    while i + 1 < len(q) and _cutoff_ok(q[i + 1], target):
        i += 1
    while i >= 0 and not _cutoff_ok(q[i], target):
        i -= 1
    if i < 0:
        raise ValueError(f"no admissible cutoff for t={t}")
    return int(t0.primes[i])


def min_n_with_cutoff_at_least(p: int) -> int:
    """Smallest integer n with sieve_cutoff_z(n) >= p, for a prime p.

    Shares the tie predicate with sieve_cutoff_z so random-model marking
    thresholds replay the definition exactly.
    """
    t = _table(p)
    i = t.index_of(p)
    if i < 0 or int(t.primes[i]) != int(p):
        raise ValueError(f"{p} is not a prime in the product table")
    q_p = float(-t.log_theta[i])
    n = max(8, math.ceil(math.exp(math.exp(q_p - LOG_TIE_EPS))) - 2)
    while not (n >= 8 and _cutoff_ok(q_p, math.log(math.log(n)))):
        n += 1
    while n > 8 and _cutoff_ok(q_p, math.log(math.log(n - 1))):
        n -= 1
    return n


def iterated_logs(x: float) -> tuple[float, ...]:
    """(log x, log log x, ...) with each entry truncated at zero.

    The sequence stops at its first zero entry (everything after is zero).
    """
    if x <= 0:
        raise ValueError(f"iterated_logs requires x > 0, got {x}")
    out = []
    v = float(x)
    while True:
        v = max(0.0, math.log(v)) if v > 0 else 0.0
        out.append(v)
        if v == 0.0:
            return tuple(out)


def _log_j(logs: tuple[float, ...], j: int) -> float:
    return logs[j - 1] if j - 1 < len(logs) else 0.0


@dataclass(frozen=True)
class LambdaThresholds:
    """Growth-regime thresholds for window length y = lambda * log x."""

    x: float
    lam: float
    k: int
    lambda_prime: float
    lambda_double_prime: float | None
    lambda_0: float
    lambda_k: float
    big_k: int
    x_k: float


def lambda_double_prime(x: float) -> float:
    """exp(4 log_2 x log_4 x / log_3 x); rejects x with log_4 x = 0."""
    logs = iterated_logs(x)
    l2, l3, l4 = _log_j(logs, 2), _log_j(logs, 3), _log_j(logs, 4)
    if l4 == 0.0:
        raise ValueError(f"lambda_double_prime undefined: log_4 x = 0 for x={x}")
    return math.exp(4.0 * l2 * l4 / l3)


def thresholds(x: float, lam: float, k: int = 0) -> LambdaThresholds:
    """All growth thresholds at (x, lambda, k).

    Requires log_3 x > 0.  lambda_double_prime is None when log_4 x = 0
    (use the standalone accessor to get the rejection behavior instead).
    The k log(k/lambda) term in lambda_k is taken as 0 at k = 0.
    """
    if lam <= 0:
        raise ValueError(f"thresholds requires lambda > 0, got {lam}")
    if k < 0 or int(k) != k:
        raise ValueError(f"thresholds requires integer k >= 0, got {k}")
    k = int(k)
    logs = iterated_logs(x)
    l2, l3, l4 = _log_j(logs, 2), _log_j(logs, 3), _log_j(logs, 4)
    if l3 <= 0.0:
        raise ValueError(f"thresholds requires log_3 x > 0, got x={x}")
    lp = math.exp(math.sqrt(l2 * l3) / math.sqrt(7.0))
    lpp = math.exp(4.0 * l2 * l4 / l3) if l4 > 0.0 else None
    floor_term = l2**10
    lam0 = max(lam, floor_term)
    crowding = k * math.log(k / lam) if k > 0 else 0.0
    lamk = max(lam, float(k), crowding, floor_term)
    big_k = k * k + math.floor(800.0 * lamk)
    x_k = math.exp(math.log(x) * (1.0 - lamk ** (-21.0 / 20.0)))
    return LambdaThresholds(
        x=x,
        lam=lam,
        k=k,
        lambda_prime=lp,
        lambda_double_prime=lpp,
        lambda_0=lam0,
        lambda_k=lamk,
        big_k=int(big_k),
        x_k=x_k,
    )


@dataclass(frozen=True)
class ExperimentParams:
    """A point (x, lambda, k) with the derived window length y = lambda log x."""

    x: float
    lam: float
    k: int
    y: float
    iterated: tuple[float, ...]


def make_params(x: float, lam: float, k: int = 0) -> ExperimentParams:
    if x <= 1:
        raise ValueError(f"make_params requires x > 1, got {x}")
    if lam <= 0:
        raise ValueError(f"make_params requires lambda > 0, got {lam}")
    if k < 0 or int(k) != k:
        raise ValueError(f"make_params requires integer k >= 0, got {k}")
    return ExperimentParams(
        x=float(x),
        lam=float(lam),
        k=int(k),
        y=float(lam) * math.log(x),
        iterated=iterated_logs(x),
    )
