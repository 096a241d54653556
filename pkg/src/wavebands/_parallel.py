"""Deterministic parallel map used by the theta and epsilon sweeps."""

import os
from concurrent.futures import ThreadPoolExecutor


def default_threads():
    """Thread count from the WAVEBANDS_THREADS environment variable (default 1)."""
    try:
        return max(1, int(os.environ.get("WAVEBANDS_THREADS", "1")))
    except ValueError:
        return 1


def parallel_map(func, items, threads=1):
    """Map ``func`` over ``items`` preserving order.

    With ``threads`` <= 1 this is a plain serial map, so results are
    bitwise identical regardless of the worker count.
    """
    items = list(items)
    if threads <= 1 or len(items) <= 1:
        return [func(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(func, items))
