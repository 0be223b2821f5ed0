"""High-level driving recipes on top of the search primitives.

`minimize` scans a metric value upward and returns the first level with a
verified schedule; `intersect_measures` combines several predicate windows
and relaxes them from the back when their solution sets have no common
schedule; `sweep` tabulates predicted versus simulated success over the
iteration count. Run reports serialize a search outcome as deterministic
JSON keyed to the instance digest.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace

import numpy as np

from . import bruteforce
from .errors import AdaptiveCutoffExceeded, InputFormatError, NoScheduleInRange
from .instance import (
    Assignment,
    Instance,
    Metric,
    index_to_assignment,
    machine_label,
    metric_upper_bound,
    metric_value,
    parse_machine_label,
)
from .search import (
    Predicate,
    SearchParams,
    SearchReport,
    good_mass,
    grover_iteration,
    run_search,
    success_probability,
)
from .simulator import prepare_state

DEFAULT_MAX_ATTEMPTS = 32

REPORT_SCHEMA = "qsched-run-report-v1"


def _derived_seed(base: int, *keys: int) -> int:
    seq = np.random.SeedSequence([int(base) & (2**64 - 1), *[int(k) for k in keys]])
    return int(seq.generate_state(1, np.uint64)[0])


@dataclass
class MinimizeResult:
    value: int
    assignment: Assignment
    reports: list[SearchReport]
    skipped: list[int]


def minimize(
    inst: Instance,
    metric: Metric = "makespan",
    scan: tuple[int, int] | None = None,
    params: SearchParams = SearchParams(),
    backend: str = "compact",
    max_attempts: int = DEFAULT_MAX_ATTEMPTS,
) -> MinimizeResult:
    """Scan metric levels upward and return the first verified schedule.

    In exact-count mode, levels with zero schedules are skipped without a
    search (one enumeration pass gives every level's count up front); a level
    with solutions is retried with derived seeds until the measurement
    verifies. In adaptive mode each level gets one budgeted search and an
    exhausted budget counts as "nothing at this level".
    """
    lo, hi = scan if scan is not None else (0, metric_upper_bound(inst, metric))
    if not 0 <= lo <= hi:
        raise ValueError(f"bad scan range [{lo}, {hi}]")
    reports: list[SearchReport] = []
    skipped: list[int] = []

    if params.mode == "exact":
        hist = bruteforce.enumerate_metrics(inst, metric)
        for mu in range(lo, hi + 1):
            if hist.counts.get(mu, 0) == 0:
                skipped.append(mu)
                continue
            for attempt in range(max_attempts):
                attempt_params = replace(
                    params, rng_seed=_derived_seed(params.rng_seed, mu, attempt)
                )
                report = run_search(inst, Predicate(metric, mu, mu), attempt_params, backend)
                reports.append(report)
                if report.verified:
                    return MinimizeResult(mu, report.measured_assignment, reports, skipped)
            raise RuntimeError(
                f"{metric} level {mu} has {hist.counts[mu]} schedules but no "
                f"measurement verified in {max_attempts} attempts"
            )
    else:
        for mu in range(lo, hi + 1):
            attempt_params = replace(
                params, rng_seed=_derived_seed(params.rng_seed, mu, 0)
            )
            try:
                report = run_search(inst, Predicate(metric, mu, mu), attempt_params, backend)
            except AdaptiveCutoffExceeded:
                skipped.append(mu)
                continue
            reports.append(report)
            return MinimizeResult(mu, report.measured_assignment, reports, skipped)

    raise NoScheduleInRange(
        f"no schedule with {metric} in [{lo}, {hi}] was found"
    )


@dataclass
class IntersectionResult:
    indices: tuple[int, ...]
    assignments: list[Assignment]
    dropped: list[Predicate]


def intersect_measures(inst: Instance, preds: list[Predicate]) -> IntersectionResult:
    """Schedules satisfying every predicate at once.

    Solution sets come from the exhaustive oracle (desk-scale, exact-count
    stance). If the intersection is empty, predicates are dropped one at a
    time from the end of the list until it is not, or none remain.
    """
    if not preds:
        raise ValueError("need at least one predicate")
    for pred in preds:
        pred.validate_for(inst)
    sets = {
        pred: frozenset(bruteforce.solution_indices(inst, pred).tolist())
        for pred in preds
    }
    active = list(preds)
    dropped: list[Predicate] = []
    while True:
        common = frozenset.intersection(*(sets[p] for p in active)) if active else frozenset()
        if common or not active:
            break
        dropped.append(active.pop())
    indices = tuple(sorted(common))
    assignments = [index_to_assignment(k, inst) for k in indices]
    return IntersectionResult(indices, assignments, dropped)


@dataclass(frozen=True)
class SweepRow:
    iterations: int
    predicted: float
    simulated: float


def sweep(
    inst: Instance,
    pred: Predicate,
    r_max: int,
    backend: str = "compact",
) -> list[SweepRow]:
    """Good-state probability, closed form vs. simulation, for 0..r_max steps."""
    pred.validate_for(inst)
    count = bruteforce.count_solutions(inst, pred)
    state = prepare_state(inst, backend)
    rows = [SweepRow(0, success_probability(0, inst.sigma, count), good_mass(state, pred))]
    for r in range(1, r_max + 1):
        state = grover_iteration(state, pred)
        rows.append(
            SweepRow(r, success_probability(r, inst.sigma, count), good_mass(state, pred))
        )
    return rows


def sweep_csv_lines(rows: list[SweepRow]) -> list[str]:
    lines = ["iterations,predicted,simulated"]
    lines.extend(f"{r.iterations},{r.predicted!r},{r.simulated!r}" for r in rows)
    return lines


def build_run_report(
    inst: Instance,
    pred: Predicate,
    params: SearchParams,
    backend: str,
    report: SearchReport,
) -> dict:
    """Deterministic JSON document for one search run.

    Everything present is reproducible from (instance, flags, seed); wall
    time is deliberately not part of the document so identical runs are
    byte-identical.
    """
    return {
        "schema": REPORT_SCHEMA,
        "instance": {
            "digest": inst.digest,
            "n_jobs": inst.n_jobs,
            "n_machines": inst.n_machines,
            "q_bits": inst.q_bits,
        },
        "backend": backend,
        "predicate": {"metric": pred.metric, "lo": pred.lo, "hi": pred.hi},
        "params": {
            "mode": params.mode,
            "phi": params.phi,
            "varphi": params.varphi,
            "iterations": params.iterations,
            "seed": params.rng_seed,
        },
        "result": {
            "sigma": report.sigma,
            "solution_count": report.solution_count,
            "theta": report.theta,
            "iterations_run": report.iterations_run,
            "predicted_success": report.predicted_success,
            "measured_index": report.measured_index,
            "measured_assignment": [machine_label(j) for j in report.measured_assignment],
            "verified": report.verified,
            "metric_value": report.metric_value,
        },
    }


def run_report_json(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def load_run_report(text: str, inst: Instance | None = None) -> dict:
    """Parse a run report; with the instance at hand, recheck the verdict.

    The stored `verified` flag is never trusted on load: it is recomputed
    from the measured assignment and the predicate window.
    """
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"invalid run report JSON: {exc}") from exc
    if doc.get("schema") != REPORT_SCHEMA:
        raise InputFormatError(f"unknown report schema {doc.get('schema')!r}")
    if inst is not None:
        if doc["instance"]["digest"] != inst.digest:
            raise InputFormatError("report does not belong to this instance")
        assignment = tuple(
            parse_machine_label(lbl) for lbl in doc["result"]["measured_assignment"]
        )
        value = metric_value(assignment, inst, doc["predicate"]["metric"])
        doc["result"]["metric_value"] = value
        doc["result"]["verified"] = (
            doc["predicate"]["lo"] <= value <= doc["predicate"]["hi"]
        )
    return doc
