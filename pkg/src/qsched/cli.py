"""Command-line driver.

Exit codes: 0 success (verified where applicable); 2 no solution / nothing
in range / search budget exhausted; 3 capacity exceeded; 4 malformed input.
`QSCHED_THREADS` caps the enumeration worker pool; results do not depend on
it.
"""

from __future__ import annotations

import functools
import math
import sys
import time
from pathlib import Path

import click

from . import bruteforce, driver
from .encoding import job_superposition, render_schedule_ket, schedule_basis
from .errors import (
    AdaptiveCutoffExceeded,
    CapacityExceeded,
    InputFormatError,
    NoScheduleInRange,
    NoSolution,
)
from .instance import (
    METRICS,
    Instance,
    assignment_to_index,
    format_assignment,
    index_to_assignment,
    machine_loads,
    makespan,
    metric_upper_bound,
)
from .search import Predicate, SearchParams, run_search
from .simulator import BACKENDS


def _exit_mapped(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InputFormatError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(4)
        except CapacityExceeded as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(3)
        except (NoSolution, NoScheduleInRange, AdaptiveCutoffExceeded) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(2)

    return wrapper


def _parse_window(text: str) -> tuple[int, int]:
    parts = text.split(":")
    try:
        if len(parts) == 1:
            lo = hi = int(parts[0])
        elif len(parts) == 2:
            lo, hi = int(parts[0]), int(parts[1])
        else:
            raise ValueError(text)
    except ValueError:
        raise InputFormatError(f"bad range {text!r}, expected LO or LO:HI") from None
    return lo, hi


def _predicate(metric: str, lo: int, hi: int | None, inst: Instance) -> Predicate:
    if hi is None:
        hi = metric_upper_bound(inst, metric)
    try:
        pred = Predicate(metric, lo, hi)
        pred.validate_for(inst)
    except ValueError as exc:
        raise InputFormatError(str(exc)) from exc
    return pred


def _params(**kwargs) -> SearchParams:
    try:
        return SearchParams(**kwargs)
    except ValueError as exc:
        raise InputFormatError(str(exc)) from exc


@click.group()
def main():
    """Schedule search by amplitude amplification, checked against brute force."""


@main.command()
@click.argument("instance_file")
@click.option("--metric", type=click.Choice(METRICS), default="makespan", show_default=True)
@click.option("--csv", "csv_out", default=None, help="Write the value,count histogram here.")
@_exit_mapped
def brute(instance_file, metric, csv_out):
    """Exhaustive histogram of a metric, plus its optimum."""
    inst = Instance.from_file(instance_file)
    hist = bruteforce.enumerate_metrics(inst, metric)
    value, witness = bruteforce.optimum(inst, metric)
    click.echo(f"sigma = {hist.sigma} schedules")
    click.echo(f"distinct {metric} values = {len(hist.counts)}")
    click.echo(
        f"optimal {metric} = {value} at index {assignment_to_index(witness, inst)} "
        f"{format_assignment(witness)} ({hist.counts[value]} schedules attain it)"
    )
    if csv_out:
        Path(csv_out).write_text("\n".join(hist.csv_lines()) + "\n", encoding="utf-8")
        click.echo(f"histogram written to {csv_out}")


@main.command()
@click.argument("instance_file")
@click.option("--target", required=True, help="Metric window LO or LO:HI.")
@click.option("--metric", type=click.Choice(METRICS), default="makespan", show_default=True)
@click.option("--backend", type=click.Choice(BACKENDS), default="compact", show_default=True)
@click.option("--mode", type=click.Choice(["exact", "adaptive"]), default="exact", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--phi", type=float, default=math.pi, help="Zero-state reflection phase (radians).")
@click.option("--varphi", type=float, default=math.pi, help="Oracle phase (radians).")
@click.option("--iterations", type=int, default=None, help="Force the iteration count (exact mode).")
@click.option("--json", "json_out", default=None, help="Write the run report here.")
@_exit_mapped
def solve(instance_file, target, metric, backend, mode, seed, phi, varphi, iterations, json_out):
    """Search for one schedule whose metric falls in the target window."""
    inst = Instance.from_file(instance_file)
    lo, hi = _parse_window(target)
    pred = _predicate(metric, lo, hi, inst)
    params = _params(phi=phi, varphi=varphi, iterations=iterations, mode=mode, rng_seed=seed)
    started = time.perf_counter()
    report = run_search(inst, pred, params, backend)
    elapsed = time.perf_counter() - started
    click.echo(
        f"sigma = {report.sigma}, solutions = {report.solution_count}, "
        f"iterations = {report.iterations_run}"
    )
    if report.predicted_success is not None:
        click.echo(f"predicted success = {report.predicted_success:.6f}")
    click.echo(
        f"measured index {report.measured_index} "
        f"{format_assignment(report.measured_assignment)}: "
        f"{metric} = {report.metric_value}, verified = {'yes' if report.verified else 'no'}"
    )
    click.echo(f"wall time {elapsed:.3f}s", err=True)
    if json_out:
        doc = driver.build_run_report(inst, pred, params, backend, report)
        Path(json_out).write_text(driver.run_report_json(doc), encoding="utf-8")
        click.echo(f"report written to {json_out}")
    if not report.verified:
        sys.exit(2)


@main.command()
@click.argument("instance_file")
@click.option("--metric", type=click.Choice(METRICS), default="makespan", show_default=True)
@click.option("--range", "scan_range", default=None, help="Scan window LO:HI (default full).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--mode", type=click.Choice(["exact", "adaptive"]), default="exact", show_default=True)
@click.option("--backend", type=click.Choice(BACKENDS), default="compact", show_default=True)
@_exit_mapped
def minimize(instance_file, metric, scan_range, seed, mode, backend):
    """Find the smallest metric value that some schedule attains."""
    inst = Instance.from_file(instance_file)
    scan = _parse_window(scan_range) if scan_range else None
    params = _params(mode=mode, rng_seed=seed)
    result = driver.minimize(inst, metric, scan, params, backend)
    click.echo(f"minimal {metric} = {result.value}")
    click.echo(
        f"schedule index {assignment_to_index(result.assignment, inst)} "
        f"{format_assignment(result.assignment)}"
    )
    click.echo(
        f"levels skipped (no schedule): {len(result.skipped)}, "
        f"searches run: {len(result.reports)}"
    )


@main.command()
@click.argument("instance_file")
@click.option("--target", required=True, help="Metric window LO or LO:HI.")
@click.option("--metric", type=click.Choice(METRICS), default="makespan", show_default=True)
@click.option("--rmax", type=int, required=True, help="Largest iteration count to tabulate.")
@click.option("--csv", "csv_out", required=True, help="Write iterations,predicted,simulated here.")
@click.option("--backend", type=click.Choice(BACKENDS), default="compact", show_default=True)
@_exit_mapped
def sweep(instance_file, target, metric, rmax, csv_out, backend):
    """Tabulate success probability against the iteration count."""
    inst = Instance.from_file(instance_file)
    lo, hi = _parse_window(target)
    pred = _predicate(metric, lo, hi, inst)
    if rmax < 0:
        raise InputFormatError("--rmax must be >= 0")
    rows = driver.sweep(inst, pred, rmax, backend)
    Path(csv_out).write_text("\n".join(driver.sweep_csv_lines(rows)) + "\n", encoding="utf-8")
    peak = max(rows, key=lambda row: row.simulated)
    click.echo(f"{len(rows)} rows written to {csv_out}")
    click.echo(f"peak simulated success {peak.simulated:.6f} at {peak.iterations} iterations")


@main.command()
@click.argument("instance_file")
@click.option("--job", "job_label", type=int, default=None, help="1-based job number.")
@click.option("--schedule", "schedule_index", type=int, default=None, help="Schedule index in [0, sigma).")
@_exit_mapped
def encode(instance_file, job_label, schedule_index):
    """Dump register encodings in paper-style ket notation."""
    inst = Instance.from_file(instance_file)

    def echo_job(i: int) -> None:
        terms = job_superposition(i, inst)
        kets = " + ".join(bs.ket() for _, bs in terms)
        click.echo(f"|J{i + 1}> = {terms[0][0]:g} ({kets})")

    if job_label is None and schedule_index is None:
        click.echo(
            f"jobs = {inst.n_jobs}, machines = {inst.n_machines}, "
            f"q = {inst.q_bits} (job register {inst.m_bits}+{inst.q_bits} bits)"
        )
        for i in range(inst.n_jobs):
            echo_job(i)
        return
    if job_label is not None:
        if not 1 <= job_label <= inst.n_jobs:
            raise InputFormatError(f"--job must be in [1, {inst.n_jobs}]")
        echo_job(job_label - 1)
    if schedule_index is not None:
        if not 0 <= schedule_index < inst.sigma:
            raise InputFormatError(f"--schedule must be in [0, {inst.sigma})")
        a = index_to_assignment(schedule_index, inst)
        loads = machine_loads(a, inst)
        width = inst.n_bits + inst.q_bits
        click.echo(f"schedule {schedule_index} = {format_assignment(a)}")
        click.echo(f"|S> = {render_schedule_ket(schedule_basis(schedule_index, inst), inst)}")
        load_kets = " ".join(f"|{load:0{width}b}>" for load in loads)
        click.echo(f"loads = {load_kets} = {loads}")
        click.echo(f"makespan = |{makespan(loads):0{width}b}> = {makespan(loads)}")


@main.command()
@click.argument("instance_file")
@click.option(
    "--pred",
    "pred_specs",
    multiple=True,
    required=True,
    help="Predicate METRIC:LO[:HI]; repeat for multiple measures.",
)
@click.option("--limit", type=int, default=16, show_default=True, help="Max schedules to print.")
@_exit_mapped
def intersect(instance_file, pred_specs, limit):
    """Schedules meeting several metric windows at once, relaxed from the back."""
    inst = Instance.from_file(instance_file)
    preds = []
    for spec in pred_specs:
        parts = spec.split(":")
        if len(parts) not in (2, 3) or parts[0] not in METRICS:
            raise InputFormatError(
                f"bad predicate {spec!r}, expected METRIC:LO[:HI] with metric in {METRICS}"
            )
        try:
            lo = int(parts[1])
            hi = int(parts[2]) if len(parts) == 3 and parts[2] else None
        except ValueError:
            raise InputFormatError(f"bad predicate bounds in {spec!r}") from None
        preds.append(_predicate(parts[0], lo, hi, inst))
    result = driver.intersect_measures(inst, preds)
    for pred in preds:
        status = "dropped" if pred in result.dropped else "kept"
        click.echo(f"{pred.metric} in [{pred.lo}, {pred.hi}]: {status}")
    click.echo(f"intersection: {len(result.indices)} schedules")
    for k, a in list(zip(result.indices, result.assignments))[:limit]:
        click.echo(f"  index {k} {format_assignment(a)}")
    if len(result.indices) > limit:
        click.echo(f"  ... {len(result.indices) - limit} more")


if __name__ == "__main__":
    main()
