"""Experiment runner: declarative configs in, CSV tables and a report out.

Four experiments tie the library together: gap_tail measures the long-gap
counter M_A(x; lambda log x) against the exponential rate, poisson_fit
compares the window-count distribution N_A(x; y, k) with the Poisson law,
model_compare puts tuple counts in primes / Cramer / random-sieve sets
side by side with the weighted and unweighted predictions, and
breakdown_scan follows the empty-window frequency into the large-lambda
regime where the Poisson heuristic under-counts.

Configs are single JSON documents validated strictly: unknown keys are
rejected outright (exit 2) so typos cannot silently fall back to
defaults.  Module failures exit 3; success exits 0.  Every stochastic run
is keyed by explicit seeds and reruns bit-identically.  Columns whose
values drop o(1) factors from asymptotic statements carry a _nominal
suffix; read them as shapes to compare against, not as ground truth.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np
from scipy.integrate import quad

from . import __version__, parallel
from .delay import fplus_upper, linear_sieve_fF
from .kernels import BACKEND
from .models import bft_sample, cramer_sample
from .primes import IntegerSet, gap_count_M, primes_in, window_histogram
from .singular import OffsetTuple, singular_series

MODEL_NAMES = ("primes", "cramer", "bft")
STOCHASTIC = ("cramer", "bft")


class ConfigError(ValueError):
    pass


def _as_float(v, positive=False, name=""):
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigError(f"{name} must be a number, got {v!r}")
    if positive and v <= 0:
        raise ConfigError(f"{name} must be positive, got {v}")
    return float(v)


def _as_float_list(v, positive=False, name=""):
    if not isinstance(v, list):
        raise ConfigError(f"{name} must be a list, got {v!r}")
    return [_as_float(e, positive, f"{name} entry") for e in v]


def _as_int(v, minimum=None, name=""):
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigError(f"{name} must be an integer, got {v!r}")
    if minimum is not None and v < minimum:
        raise ConfigError(f"{name} must be >= {minimum}, got {v}")
    return int(v)


def _as_models(v, name="models"):
    if not isinstance(v, list) or not v:
        raise ConfigError(f"{name} must be a non-empty list")
    for m in v:
        if m not in MODEL_NAMES:
            raise ConfigError(f"unknown model {m!r}; choose from {MODEL_NAMES}")
    if len(set(v)) != len(v):
        raise ConfigError(f"{name} must not repeat entries")
    return list(v)


def _as_seeds(v, name="seeds"):
    if not isinstance(v, list):
        raise ConfigError(f"{name} must be a list of integers")
    return [_as_int(s, 0, f"{name} entry") for s in v]


def _as_int_list(v, minimum=None, name=""):
    if not isinstance(v, list):
        raise ConfigError(f"{name} must be a list of integers")
    return [_as_int(e, minimum, f"{name} entry") for e in v]


def _as_tuples(v, name="tuples"):
    if not isinstance(v, list):
        raise ConfigError(f"{name} must be a list of offset lists")
    out = []
    for t in v:
        if not isinstance(t, list) or not t:
            raise ConfigError(f"each tuple must be a non-empty offset list, got {t!r}")
        offs = tuple(_as_int(h, 0, "offset") for h in t)
        if len(set(offs)) != len(offs):
            raise ConfigError(f"tuple offsets must be distinct, got {t!r}")
        out.append(offs)
    return out


def _validate(cfg: dict, schema: dict) -> dict:
    """Strict keyword check; schema maps key -> (required, default, conv)."""
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(cfg) - set(schema))
    if unknown:
        raise ConfigError(f"unknown config keys: {unknown}")
    out = {}
    for key, (required, default, conv) in schema.items():
        if key in cfg:
            out[key] = conv(cfg[key])
        elif required:
            raise ConfigError(f"missing required config key: {key!r}")
        else:
            out[key] = default
    return out


def _require_seeds(cfg):
    if any(m in STOCHASTIC for m in cfg["models"]) and not cfg["seeds"]:
        raise ConfigError("stochastic models need a non-empty 'seeds' list")


_SCHEMAS = {
    "gap_tail": {
        "x": (True, None, lambda v: _as_float(v, True, "x")),
        "lambda_grid": (True, None, lambda v: _as_float_list(v, True, "lambda_grid")),
        "models": (False, ["primes"], _as_models),
        "seeds": (False, [], _as_seeds),
        "out": (False, None, str),
    },
    "poisson_fit": {
        "x": (True, None, lambda v: _as_float(v, True, "x")),
        "lambda": (True, None, lambda v: _as_float(v, True, "lambda")),
        "k_grid": (True, None, lambda v: _as_int_list(v, 0, "k_grid")),
        "models": (False, ["primes"], _as_models),
        "seeds": (False, [], _as_seeds),
        "out": (False, None, str),
    },
    "model_compare": {
        "x": (True, None, lambda v: _as_float(v, True, "x")),
        "tuples": (True, None, _as_tuples),
        "models": (False, ["primes"], _as_models),
        "seeds": (False, [], _as_seeds),
        "out": (False, None, str),
    },
    "breakdown_scan": {
        "x": (True, None, lambda v: _as_float(v, True, "x")),
        "lambda_grid": (True, None, lambda v: _as_float_list(v, True, "lambda_grid")),
        "c_grid": (False, [0.25, 0.5], lambda v: _as_float_list(v, True, "c_grid")),
        "models": (False, ["primes"], _as_models),
        "seeds": (False, [], _as_seeds),
        "out": (False, None, str),
    },
}


def _fmt(v) -> str:
    if isinstance(v, float):
        return "%.12g" % v
    return "" if v is None else str(v)


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _build_model(name: str, coverage: int, seed: int | None) -> IntegerSet:
    if name == "primes":
        return primes_in(0, coverage)
    if name == "cramer":
        return cramer_sample(coverage, seed)
    return bft_sample(coverage, seed)


def _model_runs(cfg) -> list[tuple[str, int | None]]:
    """(model, seed) pairs in fixed order; primes carries no seed."""
    runs = []
    for m in cfg["models"]:
        if m in STOCHASTIC:
            runs.extend((m, s) for s in cfg["seeds"])
        else:
            runs.append((m, None))
    return runs


def _append_mean_rows(rows, header, key_cols, value_cols):
    """One mean (+stderr on the first value column) row per stochastic group.

    Groups rows by (model, key columns); emits rows with seed = 'mean'.
    """
    out = []
    groups: dict[tuple, list[list]] = {}
    order: list[tuple] = []
    i_model, i_seed = header.index("model"), header.index("seed")
    for row in rows:
        if row[i_model] not in STOCHASTIC:
            continue
        key = (row[i_model],) + tuple(row[header.index(c)] for c in key_cols)
        if key not in groups:
            groups[key] = []
            order.append(key)
        groups[key].append(row)
    for key in order:
        grp = groups[key]
        if len(grp) < 2:
            continue
        mean_row = list(grp[0])
        mean_row[i_seed] = "mean"
        for col in value_cols:
            i = header.index(col)
            vals = np.array([float(r[i]) for r in grp])
            mean_row[i] = float(vals.mean())
        i0 = header.index(value_cols[0])
        sd = np.std([float(r[i0]) for r in grp], ddof=1)
        mean_row[header.index("stderr")] = float(sd / math.sqrt(len(grp)))
        out.append(mean_row)
    rows.extend(out)


def run_gap_tail(cfg) -> dict:
    _require_seeds(cfg)
    x = cfg["x"]
    logx = math.log(x)
    y_max = max((math.floor(lam * logx) for lam in cfg["lambda_grid"]), default=0)
    coverage = math.floor(x) + y_max
    header = ["model", "seed", "lambda", "y", "count_M", "ratio_nominal", "stderr"]
    rows = []
    for model, seed in _model_runs(cfg):
        A = _build_model(model, coverage, seed)
        for lam in cfg["lambda_grid"]:
            m = gap_count_M(A, x, lam * logx)
            ratio = m * logx / (x * math.exp(-lam))
            rows.append([model, seed, lam, math.floor(lam * logx), m, ratio, None])
    _append_mean_rows(rows, header, ["lambda"], ["count_M", "ratio_nominal"])
    return {
        "table": "gap_tail.csv",
        "header": header,
        "rows": rows,
        "provenance": _provenance(cfg),
    }


def run_poisson_fit(cfg) -> dict:
    _require_seeds(cfg)
    x, lam = cfg["x"], cfg["lambda"]
    logx = math.log(x)
    y = lam * logx
    xf = math.floor(x)
    coverage = xf + math.floor(y)
    header = [
        "model", "seed", "k", "count_N", "frequency",
        "poisson_nominal", "ratio_nominal", "stderr",
    ]
    rows = []
    chi = []
    for model, seed in _model_runs(cfg):
        A = _build_model(model, coverage, seed)
        hist = window_histogram(A, x, y)
        chi_sq = 0.0
        for k in cfg["k_grid"]:
            n_k = int(hist[k]) if k < len(hist) else 0
            freq = n_k / xf
            pois = math.exp(-lam) * lam**k / math.factorial(k)
            rows.append([model, seed, k, n_k, freq, pois, freq / pois, None])
            chi_sq += xf * (freq - pois) ** 2 / pois
        chi.append(
            {"model": model, "seed": seed, "chi_square": chi_sq,
             "dof": max(len(cfg["k_grid"]) - 1, 1)}
        )
    _append_mean_rows(rows, header, ["k"], ["count_N", "frequency", "ratio_nominal"])
    return {
        "table": "poisson_fit.csv",
        "header": header,
        "rows": rows,
        "provenance": _provenance(cfg),
        "extras": {"chi_square": chi},
    }


def _tuple_count(A: IntegerSet, x: float, offsets: tuple[int, ...]) -> int:
    """#{1 <= n <= floor(x) : n + h in A for every offset h}."""
    xf = math.floor(x)
    h_max = max(offsets)
    A.assert_coverage(xf + h_max)
    total = 0
    chunk = 1 << 22
    for lo in range(0, xf, chunk):
        hi = min(lo + chunk, xf)
        members = A.between(lo, hi + h_max)
        ind = np.zeros(hi + h_max - lo, dtype=bool)
        ind[members - lo - 1] = True
        hit = np.ones(hi - lo, dtype=bool)
        for h in offsets:
            hit &= ind[h : h + (hi - lo)]
        total += int(np.count_nonzero(hit))
    return total


def run_model_compare(cfg) -> dict:
    _require_seeds(cfg)
    x = cfg["x"]
    xf = math.floor(x)
    tuples = [OffsetTuple.make(t) for t in cfg["tuples"]]
    h_max = max((t.offsets[-1] for t in tuples), default=0)
    coverage = xf + h_max
    header = [
        "model", "seed", "tuple", "count",
        "hl_nominal", "cramer_nominal", "ratio_hl_nominal", "stderr",
    ]
    predictions = {}
    for t in tuples:
        integral = quad(lambda v, k=t.k: 1.0 / math.log(v) ** k, 2.0, x, limit=200)[0]
        predictions[t.offsets] = (singular_series(t.offsets).value * integral, integral)
    rows = []
    for model, seed in _model_runs(cfg):
        A = _build_model(model, coverage, seed)
        for t in tuples:
            label = "+".join(str(h) for h in t.offsets)
            count = _tuple_count(A, x, t.offsets)
            hl, cramer = predictions[t.offsets]
            ratio = count / hl if hl > 0 else float("nan")
            rows.append([model, seed, label, count, hl, cramer, ratio, None])
    _append_mean_rows(rows, header, ["tuple"], ["count", "ratio_hl_nominal"])
    return {
        "table": "model_compare.csv",
        "header": header,
        "rows": rows,
        "provenance": _provenance(cfg),
    }


def run_breakdown_scan(cfg) -> dict:
    _require_seeds(cfg)
    x = cfg["x"]
    logx = math.log(x)
    xf = math.floor(x)
    y_max = max((math.floor(lam * logx) for lam in cfg["lambda_grid"]), default=0)
    coverage = xf + y_max
    cs = sorted(cfg["c_grid"])
    header = (
        ["model", "seed", "lambda", "y", "count_N0", "frequency",
         "ratio_nominal", "u", "maier_factor_nominal"]
        + [f"f_{1 + 1 / c:g}_nominal" for c in cs]
        + [f"fplus_{1 + 1 / c:g}_nominal" for c in cs]
        + ["stderr"]
    )
    f_cols = [linear_sieve_fF(1 + 1 / c)[0] for c in cs]
    fplus_cols = [fplus_upper(1 + 1 / c) for c in cs]
    rows = []
    for model, seed in _model_runs(cfg):
        A = _build_model(model, coverage, seed)
        for lam in cfg["lambda_grid"]:
            hist = window_histogram(A, x, lam * logx)
            n0 = int(hist[0])
            freq = n0 / xf
            ratio = freq * math.exp(lam)
            if lam > 1.0:
                u = math.log(logx) / math.log(lam)
                factor = math.exp(lam * math.exp(-u * math.log(u)))
            else:
                u, factor = float("nan"), float("nan")
            rows.append(
                [model, seed, lam, math.floor(lam * logx), n0, freq, ratio, u, factor]
                + f_cols + fplus_cols + [None]
            )
    _append_mean_rows(rows, header, ["lambda"], ["count_N0", "frequency", "ratio_nominal"])
    return {
        "table": "breakdown_scan.csv",
        "header": header,
        "rows": rows,
        "provenance": _provenance(cfg),
    }


def _provenance(cfg) -> dict:
    note = {}
    for m in cfg["models"]:
        note[m] = "exact count" if m == "primes" else "Monte Carlo; mean rows carry stderr"
    note["_nominal columns"] = "asymptotic predictions with o(1) factors dropped"
    return note


_RUNNERS = {
    "gap_tail": run_gap_tail,
    "poisson_fit": run_poisson_fit,
    "model_compare": run_model_compare,
    "breakdown_scan": run_breakdown_scan,
}


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="sievelab", description="prime-gap sieve laboratory experiments"
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in _RUNNERS:
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="path to a JSON config")
        sp.add_argument("--out", default=None, help="output directory")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the config seed list with one seed")
        sp.add_argument("--threads", type=int, default=None,
                        help="global cap on worker threads")
    args = parser.parse_args(argv)

    try:
        raw = json.loads(Path(args.config).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        print(f"config error: cannot read {args.config}: {exc}", file=sys.stderr)
        return 2
    try:
        cfg = _validate(raw, _SCHEMAS[args.experiment])
        if args.seed is not None:
            cfg["seeds"] = [_as_int(args.seed, 0, "--seed")]
        _require_seeds(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2

    if args.threads is not None:
        parallel.set_max_workers(args.threads)
    out_dir = Path(args.out or cfg.get("out") or ".")
    out_dir.mkdir(parents=True, exist_ok=True)

    start = time.monotonic()
    try:
        result = _RUNNERS[args.experiment](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(
            f"module error in {args.experiment} with config {args.config}: {exc}",
            file=sys.stderr,
        )
        return 3

    _write_csv(out_dir / result["table"], result["header"], result["rows"])
    report = {
        "experiment": args.experiment,
        "config": cfg,
        "version": __version__,
        "backend": BACKEND,
        "threads": parallel.get_max_workers(),
        "wall_clock_seconds": time.monotonic() - start,
        "outputs": [result["table"]],
        "provenance": result["provenance"],
    }
    report.update(result.get("extras", {}))
    (out_dir / "report.json").write_text(json.dumps(report, indent=2) + "\n")
    return 0


if __name__ == "__main__":
    sys.exit(main())
