"""Deterministic data-parallel helpers.

RIDGEFRAME_THREADS caps the worker count (0 or unset = auto).  Results are
always collected in input order and reduced in a fixed order, so outputs
are bitwise independent of the schedule.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor


def thread_count() -> int:
    raw = os.environ.get("RIDGEFRAME_THREADS", "0")
    try:
        cap = int(raw)
    except ValueError:
        cap = 0
    if cap <= 0:
        cap = os.cpu_count() or 1
    return cap


def map_ordered(fn, items):
    """Apply fn to each item, in parallel when allowed; ordered results."""
    items = list(items)
    workers = min(thread_count(), len(items)) or 1
    if workers == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))
