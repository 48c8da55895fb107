"""Order-preserving map over a process pool sized by ``SPECTRAUX_THREADS``."""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from typing import Callable, Iterable, TypeVar

T = TypeVar("T")
R = TypeVar("R")


def worker_count(requested: int | None = None) -> int:
    """Workers to use: explicit request, else ``SPECTRAUX_THREADS`` (0 = all CPUs), else 1."""
    if requested is None:
        raw = os.environ.get("SPECTRAUX_THREADS", "").strip()
        if not raw:
            return 1
        try:
            requested = int(raw)
        except ValueError:
            raise ValueError(f"SPECTRAUX_THREADS must be an integer, got {raw!r}") from None
    if requested < 0:
        raise ValueError("worker count must be >= 0")
    if requested == 0:
        return os.cpu_count() or 1
    return requested


def pmap(fn: Callable[[T], R], items: Iterable[T], workers: int | None = None) -> list[R]:
    """``list(map(fn, items))``, fanned out when more than one worker is configured."""
    items = list(items)
    n = min(worker_count(workers), len(items))
    if n <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items, chunksize=max(1, len(items) // (4 * n))))
