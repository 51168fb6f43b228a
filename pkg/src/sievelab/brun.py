"""Bonferroni coefficients and truncated inclusion-exclusion counts.

delta_K(u, k) is the alternating partial sum sum_{l=k}^K (-1)^{l-k}
C(l,k) C(u,l); run to K >= u it collapses to the indicator [u = k], and
truncating it early over- or under-shoots with a sign fixed by the parity
of K - k.  Summing delta_K(nu(n), k) over a range, with nu(n) the number
of shifts h in Omega landing n + h inside the target set, gives the
truncated counts U_K sandwiching the exact tuple count from both sides.
Everything here is exact integer arithmetic; the inequalities being
verified are combinatorial identities that floating point would blur.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .primes import IntegerSet

SUBSET_BUDGET = 10**7
_CHUNK = 1 << 21


def _comb(a: int, b: int) -> int:
    """C(a, b) with C(a, b) = 0 whenever a < 0, b < 0, or b > a."""
    if a < 0 or b < 0 or b > a:
        return 0
    return math.comb(a, b)


def delta_exact(u: int, k: int) -> int:
    """The indicator [u = k] that the truncated sums approximate."""
    if u < 0 or k < 0:
        raise ValueError("delta_exact requires u, k >= 0")
    return 1 if u == k else 0


def delta_K(u: int, k: int, K: int) -> int:
    """sum_{l=k}^K (-1)^{l-k} C(l,k) C(u,l), exact; equals [u=k] once K >= u."""
    if u < 0 or k < 0 or K < 0:
        raise ValueError("delta_K requires u, k, K >= 0")
    return sum((-1) ** (l - k) * math.comb(l, k) * _comb(u, l) for l in range(k, K + 1))


@dataclass(frozen=True)
class BonferroniReport:
    u_max: int
    k_max: int
    K_max: int
    checked: int
    violations: list[dict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> str:
        return json.dumps(
            {
                "u_max": self.u_max,
                "k_max": self.k_max,
                "K_max": self.K_max,
                "checked": self.checked,
                "ok": self.ok,
                "violations": self.violations,
            }
        )


def bonferroni_check(u_max: int, k_max: int, K_max: int) -> BonferroniReport:
    """Exhaustively verify the parity sandwich and the remainder identity.

    For every 0 <= u <= u_max, 0 <= k <= k_max, k <= K <= K_max checks
    [u=k] <= delta_K when K = k (mod 2), [u=k] >= delta_K otherwise, and
    [u=k] = delta_K + (-1)^{K-k+1} C(u,k) C(u-k-1, K-k).
    """
    if max(u_max, k_max, K_max) > 200:
        raise ValueError("bounds above 200 are not tractable exhaustively")
    checked = 0
    violations: list[dict] = []
    for u in range(u_max + 1):
        for k in range(k_max + 1):
            d = delta_exact(u, k)
            for K in range(k, K_max + 1):
                dk = delta_K(u, k, K)
                checked += 1
                even = (K - k) % 2 == 0
                if (even and d > dk) or (not even and d < dk):
                    violations.append(
                        {"u": u, "k": k, "K": K, "delta": d, "delta_K": dk,
                         "kind": "parity"}
                    )
                rem = (-1) ** (K - k + 1) * _comb(u, k) * _comb(u - k - 1, K - k)
                if d != dk + rem:
                    violations.append(
                        {"u": u, "k": k, "K": K, "delta": d, "delta_K": dk,
                         "kind": "remainder"}
                    )
    return BonferroniReport(u_max, k_max, K_max, checked, violations)


def _validate_range(n_range: tuple[int, int]) -> tuple[int, int]:
    a, b = int(n_range[0]), int(n_range[1])
    if b < a:
        raise ValueError(f"range ({a}, {b}] is empty the wrong way around")
    return a, b


def nu_histogram(A: IntegerSet, n_range: tuple[int, int], omega) -> list[int]:
    """Histogram of nu(n) = #{h in Omega : n+h in A} over n in (a, b].

    Returns counts indexed by nu = 0 .. |Omega|, exact.  Accumulates over
    n-blocks; block order does not affect the integer sums.
    """
    a, b = _validate_range(n_range)
    hs = sorted(int(h) for h in omega)
    if len(hs) != len(set(hs)) or (hs and hs[0] < 0):
        raise ValueError("omega must be distinct non-negative shifts")
    if not hs:
        return [b - a]
    h_min, h_max = hs[0], hs[-1]
    A.assert_coverage(b + h_max)
    hist = np.zeros(len(hs) + 1, dtype=np.int64)
    for lo in range(a, b, _CHUNK):
        hi = min(lo + _CHUNK, b)
        # indicator of A over [lo + 1 + h_min, hi + h_max]
        base = lo + h_min
        members = A.between(base, hi + h_max)
        ind = np.zeros(hi + h_max - base, dtype=np.int16)
        ind[members - base - 1] = 1
        nu = np.zeros(hi - lo, dtype=np.int16)
        for h in hs:
            nu += ind[h - h_min : h - h_min + (hi - lo)]
        hist += np.bincount(nu, minlength=len(hs) + 1)
    return [int(c) for c in hist]


def _check_budget(n_omega: int, K: int) -> None:
    terms = math.comb(n_omega, K) if K <= n_omega else 0
    if terms > SUBSET_BUDGET:
        raise ValueError(
            f"C({n_omega}, {K}) = {terms} subset terms exceed budget {SUBSET_BUDGET}"
        )


def truncated_count_U(
    A: IntegerSet, n_range: tuple[int, int], omega, k: int, K: int
) -> int:
    """U_K = sum over n in N of delta_K(nu(n), k), exact.

    Equals the subset-sum form sum_{l=k}^K (-1)^{l-k} C(l,k)
    sum_{|H|=l} #{n : n+H in A} because the inner sums collapse to
    C(nu(n), l) per n; the histogram computes that collapse directly.
    Sandwiches T = #{n : nu(n) = k}: T <= U_K when K = k (mod 2), T >= U_K
    otherwise.
    """
    if k < 0 or K < k:
        raise ValueError("truncated_count_U requires 0 <= k <= K")
    hs = list(omega)
    _check_budget(len(hs), K)
    hist = nu_histogram(A, n_range, hs)
    return sum(c * delta_K(u, k, K) for u, c in enumerate(hist))


def truncated_count_Uprime(A: IntegerSet, n_range: tuple[int, int], y: int, K: int) -> int:
    """U'_K = sum over n in N with n in A of delta_K(nu(n), 0), exact.

    The fixed-point variant: n itself must lie in A and nu counts the
    shifts 1..y landing back in A, so U'_K sandwiches the number of A
    elements in N followed by an A-free window of length y (T <= U'_K for
    even K, T >= U'_K for odd K).
    """
    a, b = _validate_range(n_range)
    y = int(y)
    if y < 1:
        raise ValueError(f"truncated_count_Uprime requires y >= 1, got {y}")
    _check_budget(y, K)
    A.assert_coverage(b + y)
    total = 0
    deltas = [delta_K(u, 0, K) for u in range(y + 1)]
    for lo in range(a, b, _CHUNK):
        hi = min(lo + _CHUNK, b)
        members = A.between(lo, hi + y)
        ind = np.zeros(hi + y - lo, dtype=np.int16)
        ind[members - lo - 1] = 1
        nu = np.zeros(hi - lo, dtype=np.int16)
        for h in range(1, y + 1):
            nu += ind[h : h + (hi - lo)]
        here = nu[ind[: hi - lo] == 1]
        hist = np.bincount(here, minlength=y + 1)
        total += sum(int(c) * deltas[u] for u, c in enumerate(hist))
    return total


def fixed_point_count(A: IntegerSet, n_range: tuple[int, int], y: int) -> int:
    """Direct T for the fixed-point case: #{n in N cap A : (n, n+y] misses A}."""
    a, b = _validate_range(n_range)
    y = int(y)
    if y < 1:
        raise ValueError(f"fixed_point_count requires y >= 1, got {y}")
    A.assert_coverage(b + y)
    els = A.between(a, b)
    if not len(els):
        return 0
    nxt = np.searchsorted(A.elements, els, side="right")
    has_next = nxt < len(A.elements)
    gap_ok = np.zeros(len(els), dtype=bool)
    gap_ok[has_next] = A.elements[nxt[has_next]] - els[has_next] > y
    gap_ok[~has_next] = True  # coverage extends past b + y, window is empty
    return int(np.count_nonzero(gap_ok))
