"""Exhaustive enumeration of the schedule space.

This is the ground truth the amplified search is validated against, and the
source of exact solution counts and optima. Enumeration walks schedule
indices in ascending order, vectorized in fixed-size chunks; chunk results
merge by exact integer addition, so outcomes are independent of the chunking
and of the worker count (`QSCHED_THREADS` caps the thread pool).
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CapacityExceeded
from .instance import Assignment, Instance, Metric, index_to_assignment

DEFAULT_CAP = 1 << 24
_CHUNK = 1 << 18


def _worker_count() -> int:
    raw = os.environ.get("QSCHED_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


@lru_cache(maxsize=32)
def _times_array(inst: Instance) -> np.ndarray:
    arr = np.array(inst.times, dtype=np.int64)
    arr.setflags(write=False)
    return arr


def _digits_range(inst: Instance, start: int, stop: int) -> np.ndarray:
    """Machine digits of schedule indices [start, stop); job 0 most significant."""
    ks = np.arange(start, stop, dtype=np.int64)
    n, m = inst.n_jobs, inst.n_machines
    out = np.empty((stop - start, n), dtype=np.int64)
    for i in range(n):
        out[:, i] = (ks // m ** (n - 1 - i)) % m
    return out


def _loads_range(inst: Instance, start: int, stop: int) -> np.ndarray:
    digits = _digits_range(inst, start, stop)
    times = _times_array(inst)
    loads = np.zeros((stop - start, inst.n_machines), dtype=np.int64)
    for j in range(inst.n_machines):
        loads[:, j] = (digits == j).astype(np.int64) @ times[:, j]
    return loads


def _flowtime_range(inst: Instance, start: int, stop: int) -> np.ndarray:
    # Per machine, jobs run shortest-time-first (stable sort = ties by index).
    # A job's time enters the completion of itself and of every later job on
    # the machine, so its weight is the count of assigned jobs at or after its
    # queue position.
    digits = _digits_range(inst, start, stop)
    times = _times_array(inst)
    total = np.zeros(stop - start, dtype=np.int64)
    for j in range(inst.n_machines):
        order = np.argsort(times[:, j], kind="stable")
        sorted_times = times[order, j]
        assigned = (digits[:, order] == j).astype(np.int64)
        tail_counts = np.cumsum(assigned[:, ::-1], axis=1)[:, ::-1]
        total += (assigned * tail_counts) @ sorted_times
    return total


def metric_range(inst: Instance, metric: Metric, start: int, stop: int) -> np.ndarray:
    if metric == "makespan":
        return _loads_range(inst, start, stop).max(axis=1)
    if metric == "flowtime":
        return _flowtime_range(inst, start, stop)
    raise ValueError(f"unknown metric {metric!r}")


@lru_cache(maxsize=8)
def metric_values(inst: Instance, metric: Metric) -> np.ndarray:
    """Metric of every schedule index, materialized. Cached and read-only."""
    if inst.sigma > DEFAULT_CAP:
        raise CapacityExceeded(
            f"sigma = {inst.sigma} exceeds the enumeration cap {DEFAULT_CAP}"
        )
    values = _map_chunks(inst, lambda s, e: metric_range(inst, metric, s, e))
    out = np.concatenate(values)
    out.setflags(write=False)
    return out


def _chunk_bounds(sigma: int) -> list[tuple[int, int]]:
    return [(s, min(s + _CHUNK, sigma)) for s in range(0, sigma, _CHUNK)]


def _map_chunks(inst: Instance, fn) -> list:
    bounds = _chunk_bounds(inst.sigma)
    workers = _worker_count()
    if workers == 1 or len(bounds) == 1:
        return [fn(s, e) for s, e in bounds]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, s, e) for s, e in bounds]
        return [f.result() for f in futures]  # merge in submission order


@dataclass(frozen=True)
class MetricHistogram:
    metric: Metric
    counts: dict[int, int]
    sigma: int

    def csv_lines(self) -> list[str]:
        lines = ["value,count"]
        lines.extend(f"{v},{self.counts[v]}" for v in sorted(self.counts))
        return lines


def _check_cap(inst: Instance, cap: int) -> None:
    if inst.sigma > cap:
        raise CapacityExceeded(
            f"sigma = {inst.sigma} exceeds the enumeration cap {cap}"
        )


def enumerate_metrics(
    inst: Instance, metric: Metric, cap: int = DEFAULT_CAP
) -> MetricHistogram:
    """Histogram of the metric over all sigma = M**N schedules."""
    _check_cap(inst, cap)

    def chunk_hist(start, stop):
        vals, cnts = np.unique(metric_range(inst, metric, start, stop), return_counts=True)
        return vals, cnts

    counts: dict[int, int] = {}
    for vals, cnts in _map_chunks(inst, chunk_hist):
        for v, c in zip(vals.tolist(), cnts.tolist()):
            counts[v] = counts.get(v, 0) + c
    return MetricHistogram(metric=metric, counts=counts, sigma=inst.sigma)


def count_solutions(inst: Instance, pred, cap: int = DEFAULT_CAP) -> int:
    """Number of schedules whose metric lies in [pred.lo, pred.hi]."""
    _check_cap(inst, cap)

    def chunk_count(start, stop):
        v = metric_range(inst, pred.metric, start, stop)
        return int(((v >= pred.lo) & (v <= pred.hi)).sum())

    return sum(_map_chunks(inst, chunk_count))


def solution_indices(inst: Instance, pred, cap: int = DEFAULT_CAP) -> np.ndarray:
    """All schedule indices satisfying the predicate, ascending."""
    _check_cap(inst, cap)
    v = metric_values(inst, pred.metric)
    return np.nonzero((v >= pred.lo) & (v <= pred.hi))[0]


def optimum(
    inst: Instance, metric: Metric, cap: int = DEFAULT_CAP
) -> tuple[int, Assignment]:
    """Minimal metric value and its lowest-index witness assignment."""
    _check_cap(inst, cap)

    def chunk_best(start, stop):
        v = metric_range(inst, metric, start, stop)
        pos = int(np.argmin(v))  # first occurrence = lowest index
        return int(v[pos]), start + pos

    best_value, best_index = None, None
    for value, index in _map_chunks(inst, chunk_best):
        if best_value is None or value < best_value:
            best_value, best_index = value, index
    return best_value, index_to_assignment(best_index, inst)
