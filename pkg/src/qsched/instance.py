"""Classical scheduling model: problem instances, assignments, and metrics.

The machine environment is the unrelated one: each job's processing time
depends arbitrarily on the machine it runs on. Jobs are all available at
time zero, run without preemption, and have no precedence constraints or
priorities. Identical and uniformly-related environments are special cases
and need no separate support here.

Dimensions are powers of two (N = 2**n jobs, M = 2**m machines, times below
2**q) so that every quantity packs exactly into fixed-width bit registers.
Machine and job indices are 0-based internally; rendering for output uses
the 1-based labels M1..MM / J1..JN.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Literal

from .errors import InputFormatError

Metric = Literal["makespan", "flowtime"]
METRICS: tuple[str, ...] = ("makespan", "flowtime")

# machine_of[i] = 0-based index of the machine that runs job i
Assignment = tuple[int, ...]


def _exact_log2(value: int, what: str) -> int:
    if value < 1 or value & (value - 1):
        raise InputFormatError(
            f"{what} must be a power of two, got {value} "
            "(zero-pad the time matrix yourself if that is what you want; "
            "dummy rows/columns change the problem, so it is not done silently)"
        )
    return value.bit_length() - 1


@dataclass(frozen=True)
class Instance:
    """An unrelated-parallel-machines problem with power-of-two dimensions.

    times[i][j] is the integer processing time of job i on machine j,
    with 0 <= times[i][j] < 2**q_bits.
    """

    times: tuple[tuple[int, ...], ...]
    q_bits: int

    def __post_init__(self) -> None:
        if self.q_bits < 1:
            raise InputFormatError(f"q_bits must be >= 1, got {self.q_bits}")
        if not self.times:
            raise InputFormatError("time matrix must have at least one job row")
        width = len(self.times[0])
        if width < 1:
            raise InputFormatError("time matrix must have at least one machine column")
        for row in self.times:
            if len(row) != width:
                raise InputFormatError("time matrix must be rectangular")
        _exact_log2(len(self.times), "number of jobs")
        _exact_log2(width, "number of machines")
        bound = 1 << self.q_bits
        for i, row in enumerate(self.times):
            for j, t in enumerate(row):
                if not isinstance(t, int) or isinstance(t, bool):
                    raise InputFormatError(f"times[{i}][{j}] must be an integer")
                if not 0 <= t < bound:
                    raise InputFormatError(
                        f"times[{i}][{j}] = {t} out of range [0, {bound})"
                    )

    @classmethod
    def from_lists(cls, times, q_bits: int) -> "Instance":
        return cls(tuple(tuple(row) for row in times), q_bits)

    @classmethod
    def from_json_dict(cls, doc) -> "Instance":
        if not isinstance(doc, dict):
            raise InputFormatError("instance document must be a JSON object")
        try:
            q_bits = doc["q_bits"]
            times = doc["times"]
        except (KeyError, TypeError) as exc:
            raise InputFormatError(f"instance document missing field: {exc}") from exc
        if not isinstance(q_bits, int) or isinstance(q_bits, bool):
            raise InputFormatError("q_bits must be an integer")
        if not isinstance(times, list) or not all(isinstance(r, list) for r in times):
            raise InputFormatError("times must be a list of rows")
        return cls.from_lists(times, q_bits)

    @classmethod
    def from_file(cls, path) -> "Instance":
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as exc:
            raise InputFormatError(f"cannot read instance file {path}: {exc}") from exc
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputFormatError(f"invalid JSON in {path}: {exc}") from exc
        return cls.from_json_dict(doc)

    def to_json_dict(self) -> dict:
        return {"q_bits": self.q_bits, "times": [list(row) for row in self.times]}

    @property
    def n_jobs(self) -> int:
        return len(self.times)

    @property
    def n_machines(self) -> int:
        return len(self.times[0])

    @property
    def n_bits(self) -> int:
        """n = log2(number of jobs)."""
        return self.n_jobs.bit_length() - 1

    @property
    def m_bits(self) -> int:
        """m = log2(number of machines)."""
        return self.n_machines.bit_length() - 1

    @property
    def sigma(self) -> int:
        """Total number of schedules, M**N."""
        return self.n_machines**self.n_jobs

    @property
    def digest(self) -> str:
        """Stable content hash used to tie run reports to their instance."""
        canon = json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()

    def time(self, job: int, machine: int) -> int:
        return self.times[job][machine]


def validate_assignment(a: Assignment, inst: Instance) -> None:
    if len(a) != inst.n_jobs:
        raise ValueError(f"assignment has {len(a)} entries, expected {inst.n_jobs}")
    for i, j in enumerate(a):
        if not 0 <= j < inst.n_machines:
            raise ValueError(f"assignment[{i}] = {j} is not a machine index")


def machine_loads(a: Assignment, inst: Instance) -> tuple[int, ...]:
    """Total running time accumulated on each machine under assignment `a`."""
    loads = [0] * inst.n_machines
    for i, j in enumerate(a):
        loads[j] += inst.times[i][j]
    return tuple(loads)


def makespan(loads: tuple[int, ...]) -> int:
    """Largest per-machine completion time."""
    return max(loads)


def total_flowtime(a: Assignment, inst: Instance) -> int:
    """Sum of job completion times under assignment `a`.

    Jobs sharing a machine run sequentially, shortest processing time first
    (ties broken by lower job index). SPT is the order that minimizes the sum
    on each machine, and fixing it makes the metric a function of the
    assignment alone.
    """
    total = 0
    for j in range(inst.n_machines):
        queue = sorted(
            (inst.times[i][j], i) for i in range(inst.n_jobs) if a[i] == j
        )
        elapsed = 0
        for t, _ in queue:
            elapsed += t
            total += elapsed
    return total


def metric_value(a: Assignment, inst: Instance, metric: Metric) -> int:
    if metric == "makespan":
        return makespan(machine_loads(a, inst))
    if metric == "flowtime":
        return total_flowtime(a, inst)
    raise ValueError(f"unknown metric {metric!r}")


def metric_upper_bound(inst: Instance, metric: Metric) -> int:
    """Largest value the metric can take on any schedule (inclusive)."""
    if metric == "makespan":
        # every machine load fits in n+q bits
        return (1 << (inst.n_bits + inst.q_bits)) - 1
    if metric == "flowtime":
        # N jobs each completing below N * 2**q
        return (1 << (2 * inst.n_bits + inst.q_bits)) - 1
    raise ValueError(f"unknown metric {metric!r}")


def index_to_assignment(k: int, inst: Instance) -> Assignment:
    """Base-M digit expansion of k, job 0 as the most significant digit."""
    if not 0 <= k < inst.sigma:
        raise ValueError(f"schedule index {k} out of range [0, {inst.sigma})")
    m = inst.n_machines
    digits = []
    for _ in range(inst.n_jobs):
        k, d = divmod(k, m)
        digits.append(d)
    return tuple(reversed(digits))


def assignment_to_index(a: Assignment, inst: Instance) -> int:
    """Inverse of index_to_assignment."""
    validate_assignment(a, inst)
    k = 0
    for j in a:
        k = k * inst.n_machines + j
    return k


def machine_label(j: int) -> str:
    return f"M{j + 1}"


def parse_machine_label(label: str) -> int:
    if not label.startswith("M"):
        raise InputFormatError(f"bad machine label {label!r}")
    try:
        j = int(label[1:]) - 1
    except ValueError as exc:
        raise InputFormatError(f"bad machine label {label!r}") from exc
    if j < 0:
        raise InputFormatError(f"bad machine label {label!r}")
    return j


def format_assignment(a: Assignment) -> str:
    """Render an assignment with 1-based machine labels, e.g. [M1, M2, M1]."""
    return "[" + ", ".join(machine_label(j) for j in a) + "]"
