"""Benchmark the compiled kernels against the pure-numpy fallback.

Runs each hot kernel on a fixed workload with both backends, checks the
outputs agree bit for bit, and prints a timing table.  If the compiled
extension is not importable the script still runs the python backend and
says so.

Usage: python3 benchmarks/bench_kernels.py [--trials N] [--repeat R]
"""

import argparse
import time

import numpy as np

from sievelab import _kernels_py
from sievelab.params import prime_array
from sievelab.seeds import prime_keys, trial_seeds_vec

try:
    from sievelab import _kernels as _compiled
except ImportError:
    _compiled = None


def _time(fn, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def workloads(trials):
    w = 50
    ps = prime_array(10**4)
    pk = prime_keys(ps)
    ts = trial_seeds_vec(20250819, np.arange(trials, dtype=np.uint64))
    tr_ps = prime_array(200)
    tr_pk = prime_keys(tr_ps)
    # a composite-rich element set keeps the histogram branches busy
    els = np.flatnonzero(np.random.default_rng(7).random(2 * 10**6) < 0.08) + 1
    els = els.astype(np.int64)
    rough_ps = prime_array(19)  # full CRT period 9699690, scanned end to end
    return [
        ("mc_sift_counts", lambda k: k.mc_sift_counts(w, ps, pk, ts, False)),
        ("mc_sift_counts fz", lambda k: k.mc_sift_counts(w, ps, pk, ts, True)),
        ("mc_trace_counts", lambda k: k.mc_trace_counts(w, tr_ps, 4, tr_pk, ts, False)),
        ("window_count_hist", lambda k: k.window_count_hist(els, 1.8 * 10**6, 40)),
        ("rough_min_window", lambda k: k.rough_min_window(rough_ps, 60)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    if _compiled is None:
        print("compiled extension not available; timing python backend only")
    rows = []
    for name, call in workloads(args.trials):
        t_py, out_py = _time(lambda: call(_kernels_py), args.repeat)
        if _compiled is None:
            rows.append((name, t_py, None, None, "-"))
            continue
        t_c, out_c = _time(lambda: call(_compiled), args.repeat)
        if isinstance(out_py, tuple):
            same = out_py == out_c
        else:
            same = np.array_equal(out_py, out_c)
        rows.append((name, t_py, t_c, t_py / t_c, "yes" if same else "NO"))

    print(f"{'kernel':<20} {'python':>10} {'compiled':>10} {'speedup':>8} {'equal':>6}")
    for name, t_py, t_c, speed, same in rows:
        if t_c is None:
            print(f"{name:<20} {t_py * 1e3:>8.1f}ms {'-':>10} {'-':>8} {same:>6}")
        else:
            print(f"{name:<20} {t_py * 1e3:>8.1f}ms {t_c * 1e3:>8.1f}ms {speed:>7.1f}x {same:>6}")
    if any(r[-1] == "NO" for r in rows):
        raise SystemExit("backend outputs disagree")


if __name__ == "__main__":
    main()
