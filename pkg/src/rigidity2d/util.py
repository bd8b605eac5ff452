"""Shared plumbing helpers.

RIGIDITY_THREADS caps worker threads for the embarrassingly parallel
spots (independent certification runs, per-line censuses).  The default
is 1, which keeps everything sequential and makes output byte-stable
trivially; results are merged in input order, so any thread count gives
the same answer.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def thread_budget() -> int:
    """Worker count from RIGIDITY_THREADS; 1 when unset or malformed."""
    raw = os.environ.get("RIGIDITY_THREADS", "1")
    try:
        budget = int(raw)
    except ValueError:
        return 1
    return max(1, budget)


def parallel_map(fn: Callable[[T], R], items: Iterable[T]) -> list[R]:
    """Map ``fn`` over ``items`` preserving order.

    Runs sequentially unless RIGIDITY_THREADS allows more than one
    worker and there is more than one item.
    """
    materialized: Sequence[T] = list(items)
    budget = thread_budget()
    if budget <= 1 or len(materialized) <= 1:
        return [fn(item) for item in materialized]
    with ThreadPoolExecutor(max_workers=budget) as pool:
        return list(pool.map(fn, materialized))


__all__ = ["parallel_map", "thread_budget"]
