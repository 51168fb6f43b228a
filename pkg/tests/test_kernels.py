"""Backend equivalence: compiled kernels versus the numpy fallback."""

import itertools
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import sievelab as sl
from sievelab import _kernels_py, kernels, seeds
from sievelab.params import prime_array


def both_backends():
    impls = [("python", _kernels_py)]
    if sl.BACKEND == "compiled":
        from sievelab import _kernels

        impls.append(("compiled", _kernels))
    return impls


def test_backend_is_reported():
    assert sl.BACKEND in ("compiled", "python")
    assert kernels.BACKEND == sl.BACKEND


def test_compiled_backend_is_active():
    # the build in this repo ships the extension; catching silent fallback
    assert sl.BACKEND == "compiled"


def test_env_var_forces_python_backend():
    code = (
        "import sievelab; print(sievelab.BACKEND)"
    )
    env = dict(os.environ, SIEVELAB_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", code], capture_output=True, text=True, env=env
    )
    assert out.returncode == 0
    assert out.stdout.strip() == "python"


@given(
    st.integers(min_value=0, max_value=60),
    st.integers(min_value=0, max_value=10**6),
    st.booleans(),
)
def test_mc_sift_counts_backends_agree(w, seed, forbid_zero):
    ps = prime_array(100)
    pkeys = seeds.prime_keys(ps)
    ts = seeds.trial_seeds_vec(seed, np.arange(40, dtype=np.uint64))
    results = [
        impl.mc_sift_counts(w, ps, pkeys, ts, forbid_zero)
        for _, impl in both_backends()
    ]
    for r in results[1:]:
        assert np.array_equal(results[0], r)
        assert r.dtype == results[0].dtype


def test_mc_sift_counts_replays_model_sift():
    # kernel trials must equal the models-layer sift under the same seeds
    w, z, seed = 30, 97, 424242
    ps = prime_array(z)
    pkeys = seeds.prime_keys(ps)
    ts = seeds.trial_seeds_vec(seed, np.arange(25, dtype=np.uint64))
    for forbid_zero in (False, True):
        counts = kernels.mc_sift_counts(w, ps, pkeys, ts, forbid_zero)
        for t in (0, 7, 24):
            a = sl.sample_residues(z, seeds.trial_seed(seed, t), forbid_zero)
            assert counts[t] == sl.sift_window(w, z, a).count


@given(
    st.integers(min_value=1, max_value=50),
    st.integers(min_value=0, max_value=10**6),
    st.integers(min_value=0, max_value=8),
    st.booleans(),
)
def test_mc_trace_counts_backends_agree(w, seed, n_prefix, forbid_zero):
    ps = prime_array(60)
    if forbid_zero and n_prefix == 0:
        n_prefix = 1  # theta_hat pairing never traces p = 2
    pkeys = seeds.prime_keys(ps)
    ts = seeds.trial_seeds_vec(seed, np.arange(16, dtype=np.uint64))
    results = [
        impl.mc_trace_counts(w, ps, n_prefix, pkeys, ts, forbid_zero)
        for _, impl in both_backends()
    ]
    for r in results[1:]:
        assert np.array_equal(results[0], r)


def test_mc_trace_prefix_semantics():
    ps = prime_array(30)
    pkeys = seeds.prime_keys(ps)
    ts = seeds.trial_seeds_vec(5, np.arange(6, dtype=np.uint64))
    full = kernels.mc_trace_counts(40, ps, 0, pkeys, ts, False)
    assert full.shape == (6, len(ps) + 1)
    # column 0 with an empty prefix is the unsifted window
    assert np.all(full[:, 0] == 40)
    pre = kernels.mc_trace_counts(40, ps, 3, pkeys, ts, False)
    assert pre.shape == (6, len(ps) - 3 + 1)
    # shared suffix: trace columns line up with the full run
    assert np.array_equal(pre[:, 1:], full[:, 4:])
    sifted = kernels.mc_sift_counts(40, ps, pkeys, ts, False)
    assert np.array_equal(pre[:, -1], sifted)


@given(
    st.sets(st.integers(min_value=1, max_value=500), min_size=0, max_size=120),
    st.integers(min_value=1, max_value=300),
    st.integers(min_value=0, max_value=15),
)
def test_window_count_hist_brute_force(values, x, w):
    els = np.array(sorted(values), dtype=np.int64)
    if x + w > 500:
        x = 500 - w
    expected = np.zeros(max(w + 1, 1), dtype=np.int64)
    s = set(values)
    for n in range(1, x + 1):
        expected[sum((n + j) in s for j in range(1, w + 1))] += 1
    for name, impl in both_backends():
        got = impl.window_count_hist(els, x, w)
        assert np.array_equal(got, expected), name


def test_window_count_hist_edge_inputs():
    els = np.array([5, 9], dtype=np.int64)
    for _, impl in both_backends():
        assert impl.window_count_hist(els, 0, 4).tolist() == [0, 0, 0, 0, 0]
        assert impl.window_count_hist(els, 10, 0).tolist() == [10]
        assert impl.window_count_hist(np.array([], dtype=np.int64), 6, 2).tolist() == [6, 0, 0]


def brute_rough_min(ps, y):
    period = int(np.prod([int(p) for p in ps]))
    best, best_x = y + 1, 0
    for x in range(period):
        c = sum(
            1
            for n in range(x + 1, x + y + 1)
            if all(n % int(p) for p in ps)
        )
        if c < best:
            best, best_x = c, x
    return best, best_x


@pytest.mark.parametrize("zcap,y", [(3, 4), (5, 9), (7, 16), (7, 1)])
def test_rough_min_window_brute_force(zcap, y):
    ps = prime_array(zcap)
    expect = brute_rough_min(ps, y)
    for name, impl in both_backends():
        assert impl.rough_min_window(ps, y) == expect, name


def test_rough_min_window_empty_primes():
    ps = prime_array(2)[:0]
    for _, impl in both_backends():
        assert impl.rough_min_window(ps, 7) == (7, 0)
