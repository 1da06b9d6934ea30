"""Compensated summation and deterministic chunked reductions.

All accumulation of function values in this package goes through Kahan
summation so that quadrature means retain far more accurate digits than
naive left-to-right addition would leave after 2^26 terms.  Reductions are
chunked with a fixed chunk size and combined in ascending chunk order, so
results are bit-identical no matter how many worker threads are used.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable

CHUNK_SIZE = 4096

THREADS_ENV_VAR = "LATSHIFT_THREADS"


class KahanSum:
    """Running compensated sum.

    Keeps a correction term alongside the partial sum; adding the correction
    back into each new value cancels most of the rounding drift.
    """

    __slots__ = ("_sum", "_carry")

    def __init__(self) -> None:
        self._sum = 0.0
        self._carry = 0.0

    def add(self, value: float) -> None:
        y = value - self._carry
        t = self._sum + y
        self._carry = (t - self._sum) - y
        self._sum = t

    @property
    def value(self) -> float:
        return self._sum


def kahan_sum(values: Iterable[float]) -> float:
    acc = KahanSum()
    for v in values:
        acc.add(v)
    return acc.value


def thread_count(threads: int | None = None) -> int:
    """Resolve a worker count, defaulting to the LATSHIFT_THREADS env var."""
    if threads is None:
        raw = os.environ.get(THREADS_ENV_VAR)
        if raw is None:
            return 1
        try:
            threads = int(raw)
        except ValueError:
            raise ValueError(f"{THREADS_ENV_VAR} must be an integer, got {raw!r}")
    if threads < 1:
        raise ValueError(f"thread count must be >= 1, got {threads}")
    return threads


def _chunk_ranges(n: int, chunk_size: int) -> list[range]:
    return [range(lo, min(lo + chunk_size, n)) for lo in range(0, n, chunk_size)]


def chunked_sum(
    term: Callable[[int], float],
    n: int,
    *,
    chunk_size: int = CHUNK_SIZE,
    threads: int | None = None,
) -> float:
    """Kahan sum of term(0) .. term(n-1) with a deterministic reduction.

    Each fixed-size chunk is summed with its own compensated accumulator;
    the per-chunk sums are then combined in ascending chunk order, so the
    result does not depend on the worker count.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    workers = thread_count(threads)
    ranges = _chunk_ranges(n, chunk_size)

    def one(rng: range) -> float:
        return kahan_sum(term(i) for i in rng)

    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(one, ranges))
    else:
        partials = [one(rng) for rng in ranges]
    return kahan_sum(partials)


def chunked_map(
    fn: Callable[[int], float],
    n: int,
    *,
    chunk_size: int = CHUNK_SIZE,
    threads: int | None = None,
) -> list[float]:
    """Evaluate fn(0) .. fn(n-1), preserving index order across workers."""
    if n < 0:
        raise ValueError("n must be >= 0")
    workers = thread_count(threads)
    ranges = _chunk_ranges(n, chunk_size)

    def one(rng: range) -> list[float]:
        return [fn(i) for i in rng]

    if workers > 1 and len(ranges) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            blocks = list(pool.map(one, ranges))
    else:
        blocks = [one(rng) for rng in ranges]
    out: list[float] = []
    for block in blocks:
        out.extend(block)
    return out
