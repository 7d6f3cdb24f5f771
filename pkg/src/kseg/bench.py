"""Naive versus spectral multiplication timing."""

from __future__ import annotations

import csv
import statistics
import sys
import time
from dataclasses import dataclass
from typing import Callable, TextIO

import numpy as np

from .algebra import Element, Signature, mul_naive
from .opcount import OpCounter
from .spectral import mul_fast

STRATEGIES: dict[str, Callable] = {"naive": mul_naive, "fast": mul_fast}
FIELDS = ("n", "strategy", "mean_ns", "ops_count", "speedup")


@dataclass
class BenchRow:
    n: int
    strategy: str
    median_ns: int
    ops_count: int
    speedup: float


def signature_for(n: int, kind: str) -> Signature:
    if kind == "real":
        return Signature(n, 0)
    if kind == "complex":
        return Signature(0, n)
    if kind == "mixed":
        return Signature(n // 2, n - n // 2)
    raise ValueError(f"unknown kind {kind!r}")


def time_call(fn: Callable, reps: int, warmup: int = 2) -> int:
    """Median wall-clock duration of ``fn()`` in nanoseconds."""
    for _ in range(warmup):
        fn()
    samples = []
    for _ in range(reps):
        start = time.perf_counter_ns()
        fn()
        samples.append(time.perf_counter_ns() - start)
    return int(statistics.median(samples))


def run(n_min: int, n_max: int, reps: int, seed: int = 0, kind: str = "real") -> list[BenchRow]:
    rng = np.random.default_rng(seed)
    rows = []
    for n in range(n_min, n_max + 1):
        sig = signature_for(n, kind)
        u, v = Element.random(sig, rng), Element.random(sig, rng)
        timings = {}
        counts = {}
        for name, strategy in STRATEGIES.items():
            counter = OpCounter()
            strategy(u, v, counter)
            counts[name] = counter.total
            timings[name] = time_call(lambda: strategy(u, v), reps)
        for name in STRATEGIES:
            speedup = timings["naive"] / timings[name] if timings[name] else float("inf")
            rows.append(BenchRow(n, name, timings[name], counts[name], speedup))
    return rows


def write_csv(rows: list[BenchRow], out: TextIO | None = None) -> None:
    # the mean_ns column carries the median of the repetitions
    writer = csv.writer(out or sys.stdout, lineterminator="\n")
    writer.writerow(FIELDS)
    for r in rows:
        writer.writerow([r.n, r.strategy, r.median_ns, r.ops_count, f"{r.speedup:.3f}"])
