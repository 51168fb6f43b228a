"""Acceptance gate: one test per criterion, each printing its own verdict.

Run with -v to get one line per criterion.  Every test asserts both the
mathematical statement at its stated tolerance and the wall-clock budget.
Oracle values are pinned from independent derivations (closed forms,
exhaustive enumerations over the full residue torus, quadrature); the
derivation route is noted inline next to each pin.
"""

import itertools
import math
import time

import numpy as np
import pytest
from scipy.integrate import quad

import sievelab as sl
from sievelab import parallel, seeds
from sievelab.models import ResidueAssignment


class budget:
    """Context manager asserting the criterion's runtime budget."""

    def __init__(self, seconds):
        self.limit = seconds

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        if exc[0] is None:
            self.elapsed = time.perf_counter() - self.t0
            assert self.elapsed < self.limit, (
                f"runtime {self.elapsed:.2f}s over the {self.limit}s budget"
            )
        return False


def report(n, text):
    print(f"criterion {n:02d} PASS: {text}")


def test_criterion_01_twin_prime_constant():
    with budget(1.0) as b:
        got = sl.singular_series((0, 2)).value
        # product over primes with an analytic tail; reference value from a
        # high-precision evaluation of 2 prod_{p>2} (1 - (p-1)^-2)
        assert abs(got - 1.3203236316937392) < 1e-6
    report(1, f"singular_series((0,2)) = {got:.10f} within 1e-6 [{b.elapsed:.2f}s]")


def test_criterion_02_gallagher_average_drift_to_one():
    with budget(30.0) as b:
        g20 = sl.gallagher_average(20, 2)
        g50 = sl.gallagher_average(50, 2)
        g100 = sl.gallagher_average(100, 2)
        # pinned exhaustive sums over all C(floor(y)+1, 2) pair tuples
        assert g20.value == pytest.approx(0.8324326135059589, rel=1e-9)
        assert g50.value == pytest.approx(0.9143980134372564, rel=1e-9)
        assert g100.value == pytest.approx(0.9501090875365001, rel=1e-9)
        assert abs(g50.value - 1.0) < 0.10
        assert abs(g100.value - 1.0) < abs(g20.value - 1.0)
    report(2, f"average at y=50 is {g50.value:.6f}; drift 20->100 confirmed [{b.elapsed:.2f}s]")


def test_criterion_03_pair_sum_linear_growth():
    with budget(5.0) as b:
        for w, pinned in ((100, 97.22566827322133), (1000, 996.0816741113532)):
            got = sl.pair_series_sum(w)
            assert got == pytest.approx(pinned, rel=1e-9)  # pinned direct sum
            assert abs(got - w) <= 10.0 * math.log(w)
    report(3, "sum_{d<=w} S({0,d}) stays within 10 log w of w at w=100, 1000 "
              f"[{b.elapsed:.2f}s]")


def test_criterion_04_expectation_identity_exact():
    with budget(60.0) as b:
        for z in (2, 3, 4, 5, 6, 7):
            ps = [int(p) for p in sl.prime_array(z)]
            rough = math.prod(p - 1 for p in ps)
            totals = np.zeros(31, dtype=np.int64)
            for combo in itertools.product(*(range(p) for p in ps)):
                alive = np.ones(31, dtype=bool)
                alive[0] = False
                for p, a in zip(ps, combo):
                    start = a if a >= 1 else p
                    if start <= 30:
                        alive[start::p] = False
                totals += np.cumsum(alive)
            for y in range(1, 31):
                # integer identity: mean * torus == y * prod (p-1), exactly
                assert totals[y] == y * rough, (y, z)
    report(4, "sum of S_z over every residue assignment equals "
              "floor(y) * primorial * Theta_z exactly, all y <= 30, z <= 7 "
              f"[{b.elapsed:.2f}s]")


def test_criterion_05_monte_carlo_poisson_proxy():
    with budget(120.0) as b:
        lam = 20.0 * sl.mertens_theta(10**5)
        est = sl.monte_carlo_window(
            20, 10**5, 0, 10**5, seed=20250819, forbid_zero=True
        )
        # exact oracle for P(S = 0) in the zero-forbidden model:
        # exhaustive enumeration over the torus of primes <= 19 (1,658,880
        # combinations) crossed with the inclusion-exclusion sum
        # sum_j (-1)^j C(s, j) prod_{20 < p <= 1e5} (1 - j/(p-1)) for the
        # large primes, evaluated at 60-digit precision: 0.36770138658.
        # The unrestricted model's exact value by the same two routes is
        # 0.333387009235, which is 0.044 away from e^(-lambda); only the
        # prime-faithful variant (0 mod p never removable, matching actual
        # primes in (z, z^2]) sits near the Poisson limit.
        exact = 0.36770138658
        sigma = math.sqrt(exact * (1.0 - exact) / est.trials)
        assert abs(est.p_hat - exact) < 3.0 * sigma
        assert abs(est.p_hat - math.exp(-lam)) < 0.02
        assert est.p_hat == 0.36627  # deterministic seeded regression pin
    report(5, f"P(S=0) = {est.p_hat:.5f}: within 3 sigma of exact 0.36770 and "
              f"within 0.02 of e^-lambda = {math.exp(-lam):.5f} [{b.elapsed:.2f}s]")


def test_criterion_06_delay_closed_forms():
    with budget(10.0) as b:
        eg = math.exp(0.5772156649015329)
        assert abs(sl.buchstab_omega(3.0) - (1.0 + math.log(2.0)) / 3.0) < 1e-6
        assert abs(sl.linear_sieve_fF(3.0)[0] - (2.0 * eg / 3.0) * math.log(2.0)) < 1e-6
        assert abs(sl.buchstab_omega(10.0) - 1.0 / eg) < 1e-4
        for v in (2.5, 4.0, 8.0, 16.0):
            f_v, big_v = sl.linear_sieve_fF(v)
            if v < 16.0:
                assert f_v < 1.0 < big_v
            else:
                # at v = 16 both sit within 2e-9 of the common limit 1
                assert abs(f_v - 1.0) < 1e-8 and abs(big_v - 1.0) < 1e-8
    report(6, "omega(3), f(3) closed forms within 1e-6; omega(10) within 1e-4 "
              f"of e^-gamma; f < 1 < F bracket holds [{b.elapsed:.2f}s]")


def test_criterion_07_fplus_proxy_below_one():
    with budget(5.0) as b:
        vals = {v: sl.fplus_upper(v) for v in (1.5, 2.0, 3.0)}
        for v, out in vals.items():
            assert 0.0 < out < 1.0, (v, out)
    report(7, "fplus_upper(v) < 1 at v = 1.5, 2, 3: "
              + ", ".join(f"{v}: {x:.6f}" for v, x in vals.items())
              + f" [{b.elapsed:.2f}s]")


def test_criterion_08_bonferroni_exhaustive():
    with budget(30.0) as b:
        rep = sl.bonferroni_check(60, 20, 20)
        assert rep.checked == 14091
        assert rep.ok and rep.violations == []
    report(8, f"parity sandwich + remainder identity: {rep.checked} cases, "
              f"0 violations [{b.elapsed:.2f}s]")


def test_criterion_09_brun_sandwich_on_primes():
    with budget(30.0) as b:
        A = sl.primes_in(1, 10**4 + 25)
        omega = list(range(1, 21))
        n_range = (10**3, 10**4)
        hist = sl.nu_histogram(A, n_range, omega)
        # independent oracle: the nu histogram pins (direct shifted scan)
        assert hist[:8] == [330, 1604, 3070, 2742, 1028, 214, 12, 0]
        # pinned truncated counts (independently re-derived from the
        # subset-sum form over explicit shift subsets)
        pinned = {
            (0, 2): 7560, (0, 3): -1674, (0, 4): 604, (0, 5): 318,
            (1, 2): -18344, (1, 3): 9358, (1, 4): 246, (1, 5): 1676,
            (2, 2): 19784, (2, 3): -7918, (2, 4): 5750, (2, 5): 2890,
        }
        for k in (0, 1, 2):
            exact = hist[k]
            for K in (2, 3, 4, 5):
                u_k = sl.truncated_count_U(A, n_range, omega, k, K)
                assert u_k == pinned[(k, K)]
                if (K - k) % 2 == 0:
                    assert exact <= u_k
                else:
                    assert exact >= u_k
    report(9, "U_K sandwiches the direct count for k in {0,1,2}, K in {2..5} "
              f"on (1e3, 1e4] with Omega = [1, 20] [{b.elapsed:.2f}s]")


def test_criterion_10_interval_sieve_exactness():
    with budget(60.0) as b:
        assert sl.s_minus_exact(10, 3).value == 3
        rng = np.random.Generator(np.random.PCG64(2025))
        for x in rng.integers(0, 10**6, size=100):
            # y = 30 is one full period of {2, 3, 5}: every window holds
            # exactly prod (p - 1) = 8 rough integers
            assert sl.interval_count_S(int(x), 30, 5) == 8
        mismatches = []
        for z in (2, 3, 5, 7):
            for y in range(1, 61):
                exact = sl.s_minus_exact(y, z).value
                got = sl.s_minus_search(y, z, seed=0).value
                if got != exact:
                    mismatches.append((y, z, got, exact))
        assert mismatches == []
    report(10, "S-(10,3) = 3; S(x,30,5) = 8 at 100 random offsets; search "
               f"equals exact scan for all z <= 7, y <= 60 [{b.elapsed:.2f}s]")


def test_criterion_11_concentration_soundness():
    with budget(180.0) as b:
        trials = 10**5
        checks = []
        fw = sl.FairWalk(100)
        checks.append(("fair walk", sl.empirical_tail_check(fw, 20.0, trials, seed=11)))
        dw = sl.DriftedWalk(100, 0.1)
        checks.append(("drifted walk", sl.empirical_tail_check(dw, 30.0, trials, seed=12)))
        g3 = sl.SieveTraceGenerator(50, 2, 50, "theta")
        t3 = 2.0 * math.sqrt(g3.profile().sum_c_sq)
        checks.append(("sieve trace", sl.empirical_tail_check(g3, t3, trials, seed=13)))
        g4 = sl.SieveTraceGenerator(50, 2, 50, "theta_hat")
        p4 = g4.profile()
        t4 = 2.0 * p4.sum_d + 2.0 * math.sqrt(p4.sum_c_sq)
        checks.append(("sieve trace hat", sl.empirical_tail_check(g4, t4, trials, seed=14)))
        for name, rep in checks:
            assert not rep.violation, (name, rep)
            assert rep.frequency <= rep.bound + 5.0 * rep.stderr, name
    report(11, "tail frequencies below bounds (5 sigma slack) for "
               f"{len(checks)} generators x {trials} trials [{b.elapsed:.2f}s]")


def test_criterion_12_prime_gap_tail_at_1e8():
    with budget(300.0) as b:
        A = sl.primes_in(1, 10**8 + 40)
        pinned = {0.5: 1.1473857910435905, 1.0: 0.9592964120086754,
                  2.0: 0.7539893407007594}
        got = {}
        for lam, pin in pinned.items():
            r = sl.tail_ratio(A, 10**8, lam)
            got[lam] = r
            assert r == pytest.approx(pin, rel=1e-12)  # exact census, pinned
            assert 0.5 <= r <= 2.0
    report(12, "tail_ratio(primes, 1e8, lambda) = "
               + ", ".join(f"{l}: {r:.4f}" for l, r in got.items())
               + f", all within [0.5, 2] [{b.elapsed:.2f}s]")


def test_criterion_13_random_sieve_twin_proxy():
    with budget(600.0) as b:
        s2 = sl.twin_prime_constant()
        integral = quad(lambda t: 1.0 / math.log(t) ** 2, 2.0, 10**7, limit=200)[0]
        target = s2 * integral  # quadrature oracle: 58753.8165
        counts = []
        for seed in range(10):
            els = sl.bft_sample(10**7, seed).elements
            counts.append(int(np.count_nonzero(np.isin(els + 2, els, assume_unique=True))))
        # pinned per-seed census (fixed seeds, deterministic)
        assert counts == [58801, 58767, 58518, 58870, 58654, 58749, 58872,
                          58777, 58657, 58707]
        mean = float(np.mean(counts))
        assert abs(mean - target) / target < 0.15
    report(13, f"mean twin count {np.mean(counts):.1f} vs quadrature target "
               f"{target:.1f} (rel dev {abs(np.mean(counts)-target)/target:.2e}) "
               f"[{b.elapsed:.2f}s]")


def test_criterion_14_thread_count_invariance():
    try:
        runs = {}
        trace_runs = {}
        for workers in (1, 4, 8):
            parallel.set_max_workers(workers)
            runs[workers] = sl.monte_carlo_counts(
                20, 10**5, 10**5, seed=20250819, forbid_zero=True
            )
            trace_runs[workers] = sl.martingale_trace_ensemble(
                50, 2, 50, 20000, master_seed=13
            )[1]
        for workers in (4, 8):
            assert np.array_equal(runs[1], runs[workers])
            assert np.array_equal(trace_runs[1], trace_runs[workers])
    finally:
        parallel.set_max_workers(1)
    report(14, "Monte Carlo counts and trace ensembles bit-identical across "
               "1, 4, and 8 worker threads")
