"""Small shared helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

_THREADS_ENV = "DWGPE_THREADS"


def thread_count() -> int:
    raw = os.environ.get(_THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def ordered_parallel_map(fn, items):
    """Map fn over items, possibly concurrently, with results in input order.

    Each item is computed independently and deterministically, so the output
    is byte-for-byte identical regardless of the worker count (set via the
    DWGPE_THREADS environment variable; default serial).
    """
    items = list(items)
    workers = thread_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
