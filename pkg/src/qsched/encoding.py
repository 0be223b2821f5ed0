"""Bit-exact register layout and basis-state construction.

Every schedule is represented by fixed-width binary registers:

  [ job 0 | job 1 | ... | job N-1 | load 0 | ... | load M-1 | makespan ]

Each job subregister holds the machine index (high m bits) followed by the
processing time of that job on that machine (low q bits). Each machine-load
register is n+q bits, as is the makespan register. Bit strings render most
significant bit first, so the machine index is the left (underlined-in-print)
prefix of a job subregister.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InconsistentTimeField
from .instance import Assignment, Instance, index_to_assignment

__all__ = [
    "RegisterLayout",
    "BasisState",
    "encode_job_machine",
    "job_superposition",
    "schedule_basis",
    "decode_schedule",
    "render_job_ket",
    "render_schedule_ket",
]


@dataclass(frozen=True)
class RegisterLayout:
    """Field boundaries derived from an instance's (n, m, q)."""

    n_bits: int
    m_bits: int
    q_bits: int
    n_jobs: int
    n_machines: int

    @classmethod
    def for_instance(cls, inst: Instance) -> "RegisterLayout":
        return cls(inst.n_bits, inst.m_bits, inst.q_bits, inst.n_jobs, inst.n_machines)

    @property
    def job_width(self) -> int:
        return self.m_bits + self.q_bits

    @property
    def schedule_width(self) -> int:
        return self.n_jobs * self.job_width

    @property
    def load_width(self) -> int:
        return self.n_bits + self.q_bits

    @property
    def loads_width(self) -> int:
        return self.n_machines * self.load_width

    @property
    def makespan_width(self) -> int:
        return self.n_bits + self.q_bits

    @property
    def total_width(self) -> int:
        return self.schedule_width + self.loads_width + self.makespan_width

    # offsets are counted from the most significant bit
    def job_offset(self, i: int) -> int:
        return i * self.job_width

    def machine_field(self, i: int) -> tuple[int, int]:
        return self.job_offset(i), self.m_bits

    def time_field(self, i: int) -> tuple[int, int]:
        return self.job_offset(i) + self.m_bits, self.q_bits

    def load_field(self, j: int) -> tuple[int, int]:
        return self.schedule_width + j * self.load_width, self.load_width

    def makespan_field(self) -> tuple[int, int]:
        return self.schedule_width + self.loads_width, self.makespan_width


@dataclass(frozen=True)
class BasisState:
    """A fixed-width register value; bit 0 of `bits` is the most significant."""

    value: int
    width: int

    def __post_init__(self) -> None:
        if self.width < 0 or self.value < 0 or self.value >> self.width:
            raise ValueError(f"value {self.value} does not fit in {self.width} bits")

    @property
    def bits(self) -> str:
        return format(self.value, f"0{self.width}b") if self.width else ""

    def field(self, offset: int, width: int) -> int:
        """Extract `width` bits starting `offset` bits from the MSB end."""
        if offset < 0 or width < 0 or offset + width > self.width:
            raise ValueError("field outside register")
        shift = self.width - offset - width
        return (self.value >> shift) & ((1 << width) - 1)

    def with_field(self, offset: int, width: int, value: int) -> "BasisState":
        if value >> width:
            raise ValueError(f"field value {value} does not fit in {width} bits")
        shift = self.width - offset - width
        mask = ((1 << width) - 1) << shift
        return BasisState((self.value & ~mask) | (value << shift), self.width)

    def ket(self) -> str:
        return f"|{self.bits}>"

    def __str__(self) -> str:
        return self.ket()


def encode_job_machine(i: int, j: int, inst: Instance) -> BasisState:
    """Job-machine register: machine index in the high m bits, time below.

    For Table-1-style instances this reproduces the printed kets, e.g. job 0
    on machine 0 with time 1 is |000001> when m=2, q=4.
    """
    if not 0 <= i < inst.n_jobs:
        raise ValueError(f"job index {i} out of range")
    if not 0 <= j < inst.n_machines:
        raise ValueError(f"machine index {j} out of range")
    value = (j << inst.q_bits) | inst.times[i][j]
    return BasisState(value, inst.m_bits + inst.q_bits)


def job_superposition(i: int, inst: Instance) -> list[tuple[float, BasisState]]:
    """Equal-amplitude expansion of job i over all of its machine choices."""
    amp = 1.0 / math.sqrt(inst.n_machines)
    return [(amp, encode_job_machine(i, j, inst)) for j in range(inst.n_machines)]


def schedule_register_value(a: Assignment, inst: Instance) -> int:
    width = inst.m_bits + inst.q_bits
    value = 0
    for i, j in enumerate(a):
        value = (value << width) | (j << inst.q_bits) | inst.times[i][j]
    return value


def schedule_basis(k: int, inst: Instance) -> BasisState:
    """Concatenated job-machine registers for schedule index k, job 0 leftmost."""
    a = index_to_assignment(k, inst)
    layout = RegisterLayout.for_instance(inst)
    return BasisState(schedule_register_value(a, inst), layout.schedule_width)


def decode_schedule(b: BasisState, inst: Instance) -> Assignment:
    """Recover the assignment from a schedule register.

    The time bits are redundant given the machine index, so they double as a
    consistency check: a mismatch means the register does not hold a schedule
    produced by this instance's encoding.
    """
    layout = RegisterLayout.for_instance(inst)
    if b.width != layout.schedule_width:
        raise ValueError(
            f"schedule register is {b.width} bits, expected {layout.schedule_width}"
        )
    machines = []
    for i in range(inst.n_jobs):
        j = b.field(*layout.machine_field(i))
        t = b.field(*layout.time_field(i))
        if t != inst.times[i][j]:
            raise InconsistentTimeField(
                f"job {i + 1} subregister claims time {t} on machine M{j + 1}, "
                f"but the instance has {inst.times[i][j]}"
            )
        machines.append(j)
    return tuple(machines)


def render_job_ket(b: BasisState, inst: Instance) -> str:
    """Debug rendering with the machine index split off, e.g. |00_0001>."""
    if b.width != inst.m_bits + inst.q_bits:
        raise ValueError("not a job-machine register")
    bits = b.bits
    return f"|{bits[:inst.m_bits]}_{bits[inst.m_bits:]}>"


def render_schedule_ket(b: BasisState, inst: Instance, underscore: bool = False) -> str:
    """Schedule register as space-separated job groups, optionally underscored."""
    layout = RegisterLayout.for_instance(inst)
    if b.width != layout.schedule_width:
        raise ValueError("not a schedule register")
    groups = []
    for i in range(inst.n_jobs):
        sub = BasisState(
            b.field(layout.job_offset(i), layout.job_width), layout.job_width
        )
        groups.append(render_job_ket(sub, inst)[1:-1] if underscore else sub.bits)
    return "|" + " ".join(groups) + ">"
