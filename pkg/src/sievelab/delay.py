"""Sieve special functions: Buchstab omega, the linear-sieve pair f/F,
the e^gamma * min omega upper bound, and the extremal interval bound.

Buchstab's function solves (v omega(v))' = omega(v-1) for v >= 2 with
omega(v) = 1/v on [1, 2]; it tends to e^(-gamma) with oscillations that
change sign in every unit interval.  The linear-sieve functions satisfy

  f(v) = 0,  F(v) = 2 e^gamma / v              on (0, 2]
  v f(v) = int_1^{v-1} F(t) dt,  v F(v) = 2 e^gamma + int_1^{v-1} f(t) dt

The delay terms reach back exactly one unit, so the tables are filled one
unit interval at a time with cumulative trapezoids on a uniform grid (the
grid step divides 1 exactly, keeping every delayed read on the grid).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .params import mertens_theta

EULER_GAMMA = 0.5772156649015329
DEFAULT_H = 2.5e-4
DEFAULT_VMAX = 20.0


@dataclass(frozen=True)
class DelayTable:
    kind: str
    v_min: float
    v_max: float
    h: float
    grid: np.ndarray
    values: np.ndarray

    def __call__(self, v: float) -> float:
        if v < self.v_min or v > self.v_max:
            raise ValueError(f"{self.kind} table covers [{self.v_min}, {self.v_max}]")
        return float(np.interp(v, self.grid, self.values))


def _per_unit(h: float) -> int:
    per = round(1.0 / h)
    if abs(per * h - 1.0) > 1e-12:
        raise ValueError(f"grid step {h} must divide 1 exactly")
    return per


def _unit_blocks(n: int, per: int) -> list[tuple[int, int]]:
    """Grid-index blocks covering one unit interval each, starting at v = 2."""
    out = []
    lo = per
    while lo < n:
        out.append((lo, min(lo + per, n)))
        lo += per
    return out


@functools.lru_cache(maxsize=8)
def buchstab_table(v_max: float = DEFAULT_VMAX, h: float = DEFAULT_H) -> DelayTable:
    """omega on [1, v_max] via W = v omega, W' (v) = W(v-1)/(v-1)."""
    per = _per_unit(h)
    n = round((v_max - 1.0) / h)
    grid = 1.0 + np.arange(n + 1) * h
    w_vals = np.ones(n + 1)
    for lo, hi in _unit_blocks(n, per):
        g = w_vals[lo - per : hi - per + 1] / (grid[lo : hi + 1] - 1.0)
        inc = 0.5 * h * (g[:-1] + g[1:])
        w_vals[lo + 1 : hi + 1] = w_vals[lo] + np.cumsum(inc)
    return DelayTable("buchstab", 1.0, v_max, h, grid, w_vals / grid)


@functools.lru_cache(maxsize=8)
def linear_sieve_tables(
    v_max: float = DEFAULT_VMAX, h: float = DEFAULT_H
) -> tuple[DelayTable, DelayTable]:
    """(f, F) tables on [1, v_max]; closed forms hold below v = 2."""
    per = _per_unit(h)
    n = round((v_max - 1.0) / h)
    grid = 1.0 + np.arange(n + 1) * h
    two_eg = 2.0 * math.exp(EULER_GAMMA)
    f_vals = np.zeros(n + 1)
    big_f = two_eg / grid
    # cumulative integrals from 1, advanced in lockstep with the values
    int_f = np.zeros(n + 1)
    int_big = np.zeros(n + 1)

    def extend_integrals(lo: int, hi: int) -> None:
        inc_f = 0.5 * h * (f_vals[lo : hi + 1][:-1] + f_vals[lo : hi + 1][1:])
        inc_b = 0.5 * h * (big_f[lo : hi + 1][:-1] + big_f[lo : hi + 1][1:])
        int_f[lo + 1 : hi + 1] = int_f[lo] + np.cumsum(inc_f)
        int_big[lo + 1 : hi + 1] = int_big[lo] + np.cumsum(inc_b)

    extend_integrals(0, per)  # [1, 2]
    for lo, hi in _unit_blocks(n, per):
        f_vals[lo : hi + 1] = int_big[lo - per : hi - per + 1] / grid[lo : hi + 1]
        big_f[lo : hi + 1] = (two_eg + int_f[lo - per : hi - per + 1]) / grid[lo : hi + 1]
        extend_integrals(lo, hi)
    return (
        DelayTable("linear-sieve-f", 1.0, v_max, h, grid, f_vals),
        DelayTable("linear-sieve-F", 1.0, v_max, h, grid, big_f),
    )


def buchstab_omega(v: float, v_max: float = DEFAULT_VMAX, h: float = DEFAULT_H) -> float:
    """omega(v); exact 1/v on [1, 2], table lookup beyond."""
    if v < 1:
        raise ValueError(f"buchstab_omega requires v >= 1, got {v}")
    if v <= 2.0:
        return 1.0 / v
    if v > v_max:
        v_max = float(math.ceil(v))
    return buchstab_table(v_max, h)(v)


def linear_sieve_fF(v: float, v_max: float = DEFAULT_VMAX, h: float = DEFAULT_H) -> tuple[float, float]:
    """(f(v), F(v)); closed forms on (0, 2], table lookups beyond."""
    if v <= 0:
        raise ValueError(f"linear_sieve_fF requires v > 0, got {v}")
    if v <= 2.0:
        return 0.0, 2.0 * math.exp(EULER_GAMMA) / v
    if v > v_max:
        v_max = float(math.ceil(v))
    f_t, big_t = linear_sieve_tables(v_max, h)
    return f_t(v), big_t(v)


def fplus_upper(v: float, v_max: float = DEFAULT_VMAX, h: float = DEFAULT_H) -> float:
    """e^gamma * min_{v <= u <= v_max} omega(u), strictly below 1.

    omega - e^(-gamma) changes sign on every unit interval, so the running
    minimum sits strictly under e^(-gamma).  The grid minimum is certified
    against a half-step table before being returned.
    """
    if v <= 1:
        raise ValueError(f"fplus_upper requires v > 1, got {v}")
    if v >= v_max - 1:
        raise ValueError(f"fplus_upper needs v < v_max - 1 = {v_max - 1}")
    coarse = buchstab_table(v_max, h)
    fine = buchstab_table(v_max, h / 2.0)

    def grid_min(tab: DelayTable) -> float:
        i = int(np.searchsorted(tab.grid, v, side="left"))
        lead = min(tab(v), float(np.min(tab.values[i:]))) if i < len(tab.values) else tab(v)
        return lead

    m_c, m_f = grid_min(coarse), grid_min(fine)
    if abs(m_c - m_f) > 1e-6:
        raise ValueError(f"omega minimum not certified: {m_c} vs {m_f}")
    out = math.exp(EULER_GAMMA) * m_f
    if out >= 1.0:
        # oscillation amplitude decays like v^-v; past v ~ 7 it drops under
        # the grid error and the strict gap below 1 cannot be resolved
        raise ValueError(
            f"omega dip below e^(-gamma) is not resolvable at v={v} with h={h}"
        )
    return out


def maier_bound(y: float, z: float) -> float:
    """Nominal extremal bound y * Theta_z * (1 - exp(-u log u)), u = log y / log z.

    Valid shape for 2 <= y <= exp(sqrt z) and u >= 1; the o(1) factor of
    the underlying estimate is dropped, so treat the value as nominal.
    """
    if z < 2:
        raise ValueError(f"maier_bound requires z >= 2, got {z}")
    if y < 2 or y > math.exp(math.sqrt(z)):
        raise ValueError(f"maier_bound requires 2 <= y <= exp(sqrt z), got y={y}")
    u = math.log(y) / math.log(z)
    if u < 1:
        raise ValueError(f"maier_bound requires u >= 1, got u={u}")
    return y * mertens_theta(z) * (1.0 - math.exp(-u * math.log(u)))


def export_tables_csv(
    path, v_min: float = 1.0, v_max: float = DEFAULT_VMAX, step: float = 0.01,
    h: float = DEFAULT_H,
) -> int:
    """Write rows (v, omega, f, F) on a uniform v grid; returns row count."""
    if not (1.0 <= v_min < v_max):
        raise ValueError(f"need 1 <= v_min < v_max, got [{v_min}, {v_max}]")
    n = int(round((v_max - v_min) / step))
    with open(path, "w") as fh:
        fh.write("v,omega,f,F\n")
        for i in range(n + 1):
            v = min(v_min + i * step, v_max)
            f_v, big_v = linear_sieve_fF(v, v_max, h)
            fh.write("%.12g,%.12g,%.12g,%.12g\n" % (v, buchstab_omega(v, v_max, h), f_v, big_v))
    return n + 1
