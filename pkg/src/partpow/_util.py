"""Shared plumbing: worker-count config and order-preserving map."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def worker_count() -> int:
    """Worker cap from PPL_THREADS (default 1, floor 1)."""
    raw = os.environ.get("PPL_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def pmap(fn: Callable[[T], R], items: Sequence[T]) -> list[R]:
    """map() preserving order, threaded when PPL_THREADS > 1.

    Results are identical to sequential execution regardless of thread
    schedule; only wall time changes.
    """
    workers = worker_count()
    if workers <= 1 or len(items) < 4:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
