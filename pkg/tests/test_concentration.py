"""Azuma-type bounds against walk and sieve-trace simulators."""

import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import sievelab as sl
from sievelab.concentration import IncrementProfile


def test_azuma_closed_forms():
    prof = IncrementProfile.driftless(np.ones(100))
    assert sl.azuma_bound(0.0, prof) == 1.0
    assert sl.azuma_bound(20.0, prof) == pytest.approx(math.exp(-2.0), rel=1e-12)
    assert sl.azuma_bound(20.0, prof, sided="two") == pytest.approx(
        2.0 * math.exp(-2.0), rel=1e-12
    )
    # raw values above 1 are returned as-is
    assert sl.azuma_bound(0.1, prof, sided="two") > 1.0


def test_azuma_zero_variance_edge():
    prof = IncrementProfile.driftless(np.zeros(5))
    assert sl.azuma_bound(0.0, prof) == 1.0
    assert sl.azuma_bound(0.5, prof) == 0.0


def test_azuma_validation():
    prof = IncrementProfile.driftless(np.ones(3))
    with pytest.raises(ValueError):
        sl.azuma_bound(-1.0, prof)
    with pytest.raises(ValueError):
        sl.azuma_bound(1.0, prof, sided="both")
    drifty = IncrementProfile(np.ones(3), np.full(3, 0.1))
    with pytest.raises(ValueError):
        sl.azuma_bound(1.0, drifty)


def test_generalized_closed_form_and_domain():
    prof = IncrementProfile(np.ones(25), np.full(25, 0.1))
    # t = 10 > 2 sum d = 5; bound is 2 exp(-100 / 200)
    assert sl.generalized_azuma_bound(10.0, prof) == pytest.approx(
        2.0 * math.exp(-0.5), rel=1e-12
    )
    with pytest.raises(ValueError):
        sl.generalized_azuma_bound(5.0, prof)
    with pytest.raises(ValueError):
        sl.generalized_azuma_bound(4.0, prof)


def test_generalized_dominates_two_sided_azuma_when_driftless():
    c = np.linspace(0.5, 2.0, 30)
    plain = IncrementProfile.driftless(c)
    for t in (1.0, 5.0, 20.0):
        assert sl.generalized_azuma_bound(t, plain) >= sl.azuma_bound(
            t, plain, sided="two"
        )


@given(
    st.floats(min_value=0.0, max_value=50.0),
    st.floats(min_value=0.0, max_value=40.0),
)
def test_azuma_monotone_in_eps(e1, e2):
    prof = IncrementProfile.driftless(np.full(40, 1.5))
    lo, hi = min(e1, e1 + e2), max(e1, e1 + e2)
    assert sl.azuma_bound(hi, prof) <= sl.azuma_bound(lo, prof) + 1e-15


def test_increment_profile_validation():
    with pytest.raises(ValueError):
        IncrementProfile(np.ones(3), np.ones(2))
    with pytest.raises(ValueError):
        IncrementProfile(np.array([-1.0]), np.array([0.0]))
    with pytest.raises(ValueError):
        IncrementProfile(np.array([1.0]), np.array([-0.1]))
    prof = IncrementProfile(np.array([3.0, 4.0]), np.array([0.5, 0.25]))
    assert prof.sum_c_sq == 25.0 and prof.sum_d == 0.75


def test_fair_walk_basics():
    fw = sl.FairWalk(100)
    devs = fw.deviations(4000, seed=0)
    again = fw.deviations(4000, seed=0)
    assert np.array_equal(devs, again)
    # parity: 100 steps of +-1 land on even integers
    assert np.all(np.mod(devs, 2) == 0)
    assert abs(devs.mean()) < 4 * devs.std(ddof=1) / math.sqrt(len(devs))
    with pytest.raises(ValueError):
        sl.FairWalk(0)


def test_drifted_walk_mean_tracks_declared_drift():
    dw = sl.DriftedWalk(200, 0.05)
    devs = dw.deviations(4000, seed=1)
    # E[deviation] = sum of per-step drifts = 10
    assert abs(devs.mean() - 10.0) < 4 * devs.std(ddof=1) / math.sqrt(len(devs))
    with pytest.raises(ValueError):
        sl.DriftedWalk(10, 1.5)
    with pytest.raises(ValueError):
        sl.DriftedWalk(10, -0.1)


def test_tail_check_pinned_quadruple():
    fw = sl.FairWalk(100)
    r1 = sl.empirical_tail_check(fw, 20.0, 10**5, seed=11, sided="two")
    assert r1.bound == pytest.approx(2.0 * math.exp(-2.0), rel=1e-12)
    assert r1.frequency == 0.05741
    assert r1.kind == "azuma" and not r1.violation

    dw = sl.DriftedWalk(100, 0.1)
    r2 = sl.empirical_tail_check(dw, 30.0, 10**5, seed=12)
    assert r2.bound == pytest.approx(0.6493049347166995, rel=1e-12)
    assert r2.frequency == 0.02806
    assert r2.kind == "generalized" and not r2.violation

    g3 = sl.SieveTraceGenerator(50, 2, 50, "theta")
    t3 = 2.0 * math.sqrt(g3.profile().sum_c_sq)
    r3 = sl.empirical_tail_check(g3, t3, 2000, seed=13, sided="two")
    assert r3.frequency == 0.0 and not r3.violation

    g4 = sl.SieveTraceGenerator(50, 2, 50, "theta_hat")
    p4 = g4.profile()
    t4 = 2.0 * p4.sum_d + 2.0 * math.sqrt(p4.sum_c_sq)
    r4 = sl.empirical_tail_check(g4, t4, 2000, seed=14)
    assert r4.kind == "generalized"
    assert r4.frequency == 0.0 and not r4.violation


def test_tail_check_report_serialization():
    rep = sl.empirical_tail_check(sl.FairWalk(50), 10.0, 500, seed=3, sided="one")
    assert rep.verdict == "ok"
    doc = json.loads(rep.to_json())
    assert set(doc) == {
        "bound", "frequency", "trials", "threshold", "sided", "kind",
        "stderr", "verdict",
    }
    assert doc["sided"] == "one" and doc["verdict"] == "ok"
    assert doc["trials"] == 500


class _LyingGenerator:
    """Claims near-zero increments while emitting a real fair walk."""

    def __init__(self, n):
        self.inner = sl.FairWalk(n)
        self.n = n

    def profile(self):
        return IncrementProfile.driftless(np.full(self.n, 1e-3))

    def deviations(self, trials, seed):
        return self.inner.deviations(trials, seed)


def test_tail_check_flags_profile_violations():
    rep = sl.empirical_tail_check(_LyingGenerator(100), 10.0, 2000, seed=5, sided="two")
    assert rep.violation and rep.verdict == "violation"
    assert rep.frequency > rep.bound


def test_generalized_bound_requires_two_sided():
    dw = sl.DriftedWalk(20, 0.1)
    with pytest.raises(ValueError):
        sl.empirical_tail_check(dw, 10.0, 100, seed=0, sided="one")


def test_sieve_trace_generator_profiles():
    gen = sl.SieveTraceGenerator(50, 2, 50, "theta")
    prof = gen.profile()
    assert np.all(prof.d == 0.0)
    assert len(prof.c) == len(gen.trace_primes)
    # analytic envelope: ceil(w/p) survivors can vanish in one step
    hat = sl.SieveTraceGenerator(50, 2, 50, "theta_hat")
    hprof = hat.profile()
    assert np.any(hprof.d > 0.0)
    emp = sl.SieveTraceGenerator(
        50, 2, 50, "theta", profile_mode="empirical", pilot_trials=64
    )
    assert np.all(emp.profile().c <= prof.c + 1e-12)
    with pytest.raises(ValueError):
        sl.SieveTraceGenerator(50, 2, 50, "theta", profile_mode="guess")


def test_sieve_trace_deviations_are_bounded_by_profile_sum():
    gen = sl.SieveTraceGenerator(40, 2, 40, "theta")
    prof = gen.profile()
    devs = gen.deviations(500, seed=7)
    assert np.all(np.abs(devs) <= prof.c.sum() + 1e-9)
