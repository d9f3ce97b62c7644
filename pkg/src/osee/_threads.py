"""Deterministic thread-pool map for embarrassingly parallel work items.

Results land in an indexed output list, so the returned order (and hence any
downstream reduction or file output) never depends on scheduling.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, Sequence, TypeVar

THREADS_ENV = "OSEE_THREADS"

T = TypeVar("T")
R = TypeVar("R")


def thread_count(override: int | None = None) -> int:
    if override is not None:
        return max(1, int(override))
    env = os.environ.get(THREADS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def parallel_map(fn: Callable[[T], R], items: Iterable[T], threads: int | None = None) -> list[R]:
    """Apply fn to every item, preserving input order in the result list.

    The heavy lifting in this package happens inside BLAS/LAPACK calls that
    release the GIL, so plain threads parallelize fine. Any worker exception
    propagates and aborts the whole map.
    """
    seq: Sequence[T] = list(items)
    workers = min(thread_count(threads), len(seq))
    if workers <= 1:
        return [fn(x) for x in seq]
    out: list[R] = [None] * len(seq)  # type: ignore[list-item]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, x) for x in seq]
        for i, fut in enumerate(futures):
            out[i] = fut.result()
    return out
