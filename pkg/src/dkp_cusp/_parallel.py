"""Order-preserving map over grid points, optionally across processes."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")

ENV_THREADS = "DKP_THREADS"


def worker_count(requested: int | None = None) -> int:
    """Workers to use: explicit request, else ``DKP_THREADS``, else 1 (serial)."""
    if requested is None:
        env = os.environ.get(ENV_THREADS, "").strip()
        requested = int(env) if env else 1
    return max(1, int(requested))


def parallel_map(func: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    items = list(items)
    n = min(worker_count(workers), len(items))
    if n <= 1:
        return [func(it) for it in items]
    chunk = max(1, len(items) // (4 * n))
    with ProcessPoolExecutor(max_workers=n) as pool:
        return list(pool.map(func, items, chunksize=chunk))
