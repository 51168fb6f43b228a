"""Deterministic worker-pool helpers.

Work is always split into index-addressed blocks whose outputs are merged
in block order, so results are byte-identical for any worker count.  The
global cap defaults to 1 worker; the CLI --threads flag raises it.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

_MAX_WORKERS = 1

T = TypeVar("T")
R = TypeVar("R")


def set_max_workers(n: int) -> None:
    global _MAX_WORKERS
    if n < 1:
        raise ValueError(f"worker count must be >= 1, got {n}")
    _MAX_WORKERS = int(n)


def get_max_workers() -> int:
    return _MAX_WORKERS


def map_ordered(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """map(fn, items) preserving order, fanned out to the worker pool."""
    if _MAX_WORKERS == 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=_MAX_WORKERS) as ex:
        return list(ex.map(fn, items))


def trial_blocks(n_trials: int, block: int = 8192) -> list[tuple[int, int]]:
    """(start, stop) index blocks covering range(n_trials)."""
    return [(s, min(s + block, n_trials)) for s in range(0, n_trials, block)]
