"""Small shared helpers."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    """Parallelism cap from CURVEFLOW_THREADS (default 1)."""
    try:
        return max(1, int(os.environ.get("CURVEFLOW_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(fn, items):
    """Map preserving order; uses a thread pool when CURVEFLOW_THREADS > 1."""
    workers = thread_count()
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
