"""Ordered parallel map over family members.

Results are returned in input order whatever the thread count, so reductions
downstream are deterministic.
"""
import os
from concurrent.futures import ThreadPoolExecutor

_threads = None


def get_threads() -> int:
    if _threads is not None:
        return _threads
    try:
        return max(1, int(os.environ.get("PEGO_LAB_THREADS", "1")))
    except ValueError:
        return 1


def set_threads(n) -> None:
    global _threads
    _threads = None if n is None else max(1, int(n))


def pmap(fn, items):
    items = list(items)
    threads = min(get_threads(), len(items))
    if threads <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))
