"""Quantum-state backends for the schedule preparation and its inverse.

Two interchangeable representations:

* ``StateVector`` — sparse complex amplitudes over full-register basis
  states (schedule, machine-load, and makespan registers; keys can exceed
  64 bits, so they are plain Python ints).
* ``CompactState`` — a dense amplitude per schedule index. The load and
  makespan registers are deterministic functions of the schedule register,
  so the search dynamics live entirely in schedule space; this backend drops
  the redundant registers and scales to much larger instances.

The arithmetic steps are modeled as reversible basis-state maps, not
gate-level adder/comparator circuits: on the reachable subspace they are
exactly the permutations those circuits implement, and they are directly
testable against the classical metrics.

The preparation acts on the all-zeros register in three stages: put every
job subregister into an equal superposition of its machine choices, sum the
per-machine running times into the load registers, then write the maximum
load into the makespan register. Each stage is invertible, and
``invert_preparation`` undoes all three.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .encoding import BasisState, RegisterLayout, decode_schedule, render_job_ket
from .errors import (
    CapacityExceeded,
    InconsistentTimeField,
    NonScheduleState,
    NonZeroTarget,
)
from .instance import (
    Instance,
    assignment_to_index,
    index_to_assignment,
    machine_loads,
    makespan,
)

FULL_CAPACITY = 1 << 16
COMPACT_CAPACITY = 1 << 24

BACKENDS = ("compact", "full")


@dataclass
class StateVector:
    """Sparse full-register state: basis value (int) -> complex amplitude."""

    inst: Instance
    amps: dict[int, complex]

    @property
    def layout(self) -> RegisterLayout:
        return RegisterLayout.for_instance(self.inst)


@dataclass
class CompactState:
    """Dense amplitudes indexed by schedule index."""

    inst: Instance
    amps: np.ndarray


State = StateVector | CompactState


def _field(value: int, total: int, offset: int, width: int) -> int:
    return (value >> (total - offset - width)) & ((1 << width) - 1)


def _clear_field(value: int, total: int, offset: int, width: int) -> int:
    shift = total - offset - width
    return value & ~(((1 << width) - 1) << shift)


def _schedule_of_value(value: int, lay: RegisterLayout) -> BasisState:
    return BasisState(_field(value, lay.total_width, 0, lay.schedule_width),
                      lay.schedule_width)


def _loads_of_value(value: int, lay: RegisterLayout) -> tuple[int, ...]:
    return tuple(
        _field(value, lay.total_width, *lay.load_field(j))
        for j in range(lay.n_machines)
    )


def _pack_loads(loads, lay: RegisterLayout) -> int:
    packed = 0
    for load in loads:
        packed = (packed << lay.load_width) | load
    return packed


@lru_cache(maxsize=8)
def prepared_basis_values(inst: Instance) -> tuple[int, ...]:
    """Full-register basis value of every prepared schedule, ascending in k.

    The schedule register is strictly increasing in k (each job subregister
    grows with its machine digit), so ascending k is also ascending basis
    value.
    """
    lay = RegisterLayout.for_instance(inst)
    values = []
    for k in range(inst.sigma):
        a = index_to_assignment(k, inst)
        v = 0
        for i, j in enumerate(a):
            v = (v << lay.job_width) | (j << inst.q_bits) | inst.times[i][j]
        loads = machine_loads(a, inst)
        v = (v << lay.loads_width) | _pack_loads(loads, lay)
        v = (v << lay.makespan_width) | makespan(loads)
        values.append(v)
    return tuple(values)


@lru_cache(maxsize=8)
def _prepared_basis_set(inst: Instance) -> frozenset[int]:
    return frozenset(prepared_basis_values(inst))


def _check_capacity(inst: Instance, backend: str) -> None:
    cap = FULL_CAPACITY if backend == "full" else COMPACT_CAPACITY
    if inst.sigma > cap:
        raise CapacityExceeded(
            f"sigma = {inst.sigma} exceeds the {backend} backend capacity {cap}"
        )


def superpose_schedules(inst: Instance) -> StateVector:
    """Equal superposition of all schedule registers, ancilla registers zero."""
    _check_capacity(inst, "full")
    lay = RegisterLayout.for_instance(inst)
    tail = lay.loads_width + lay.makespan_width
    amp = complex(1.0 / math.sqrt(inst.sigma))
    amps = {}
    for k in range(inst.sigma):
        a = index_to_assignment(k, inst)
        v = 0
        for i, j in enumerate(a):
            v = (v << lay.job_width) | (j << inst.q_bits) | inst.times[i][j]
        amps[v << tail] = amp
    return StateVector(inst, amps)


def apply_load_sums(state: StateVector) -> StateVector:
    """Write each machine's total running time into its load register.

    A basis-state permutation |S, 0, c> -> |S, loads(S), c>; amplitudes are
    untouched, so the map is exactly unitary on its domain.
    """
    inst, lay = state.inst, state.layout
    total = lay.total_width
    for v in state.amps:
        if _field(v, total, lay.schedule_width, lay.loads_width):
            raise NonZeroTarget("load registers must be |0> before summation")
    new = {}
    for v, amp in state.amps.items():
        a = decode_schedule(_schedule_of_value(v, lay), inst)
        packed = _pack_loads(machine_loads(a, inst), lay)
        new[v | (packed << lay.makespan_width)] = amp
    assert len(new) == len(state.amps)
    return StateVector(inst, new)


def apply_max_load(state: StateVector) -> StateVector:
    """Write the maximum of the load registers into the makespan register."""
    inst, lay = state.inst, state.layout
    total = lay.total_width
    off, width = lay.makespan_field()
    for v in state.amps:
        if _field(v, total, off, width):
            raise NonZeroTarget("makespan register must be |0> before the max")
    new = {}
    for v, amp in state.amps.items():
        new[v | max(_loads_of_value(v, lay))] = amp
    assert len(new) == len(state.amps)
    return StateVector(inst, new)


def _toggle_time_fields(state: StateVector, i: int) -> StateVector:
    """XOR job i's processing time (for its machine digit) into its time field."""
    inst, lay = state.inst, state.layout
    total = lay.total_width
    t_off, t_width = lay.time_field(i)
    shift = total - t_off - t_width
    new = {}
    for v, amp in state.amps.items():
        j = _field(v, total, *lay.machine_field(i))
        new[v ^ (inst.times[i][j] << shift)] = amp
    return StateVector(inst, new)


def _hadamard_machine_field(state: StateVector, i: int) -> StateVector:
    """Walsh-Hadamard transform on job i's machine-index bits."""
    inst, lay = state.inst, state.layout
    if inst.m_bits == 0:
        return state
    total = lay.total_width
    off, width = lay.machine_field(i)
    shift = total - off - width
    mask = ((1 << width) - 1) << shift
    scale = 2.0 ** (-inst.m_bits / 2.0)
    new: dict[int, complex] = {}
    for v in sorted(state.amps):  # fixed accumulation order
        amp = state.amps[v] * scale
        x = (v & mask) >> shift
        base = v & ~mask
        for y in range(inst.n_machines):
            signed = -amp if (x & y).bit_count() & 1 else amp
            key = base | (y << shift)
            new[key] = new.get(key, 0j) + signed
    return StateVector(inst, {v: a for v, a in new.items() if a != 0})


def apply_preparation(state: StateVector) -> StateVector:
    """Run the full preparation on a state whose time, load, and makespan
    registers are all zero (machine-index bits may be in any superposition)."""
    for i in range(state.inst.n_jobs):
        state = _hadamard_machine_field(state, i)
        state = _toggle_time_fields(state, i)
    try:
        state = apply_load_sums(state)
    except InconsistentTimeField as exc:
        raise NonScheduleState(str(exc)) from exc
    return apply_max_load(state)


def prepare_state(inst: Instance, backend: str = "compact") -> State:
    """Uniform superposition over all sigma schedules, metrics populated."""
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}")
    _check_capacity(inst, backend)
    if backend == "compact":
        amp = 1.0 / math.sqrt(inst.sigma)
        return CompactState(inst, np.full(inst.sigma, amp, dtype=np.complex128))
    return apply_max_load(apply_load_sums(superpose_schedules(inst)))


def _uncompute_max_load(state: StateVector) -> StateVector:
    inst, lay = state.inst, state.layout
    total = lay.total_width
    off, width = lay.makespan_field()
    new = {}
    for v, amp in state.amps.items():
        expected = max(_loads_of_value(v, lay))
        if _field(v, total, off, width) != expected:
            raise NonScheduleState("makespan register does not match the loads")
        new[_clear_field(v, total, off, width)] = amp
    return StateVector(inst, new)


def _uncompute_load_sums(state: StateVector) -> StateVector:
    inst, lay = state.inst, state.layout
    total = lay.total_width
    new = {}
    for v, amp in state.amps.items():
        try:
            a = decode_schedule(_schedule_of_value(v, lay), inst)
        except InconsistentTimeField as exc:
            raise NonScheduleState(str(exc)) from exc
        if _loads_of_value(v, lay) != machine_loads(a, inst):
            raise NonScheduleState("load registers do not match the schedule")
        new[_clear_field(v, total, lay.schedule_width, lay.loads_width)] = amp
    return StateVector(inst, new)


def invert_preparation(state: State) -> State:
    """Inverse of the preparation.

    On the full backend this uncomputes the makespan and load registers and
    undoes each job's superposition loading, so the prepared state maps back
    to the all-zeros register. On the compact backend the preparation is the
    uniform-superposition map of the 2**(m*N)-dimensional index space, whose
    inverse is the normalized Walsh-Hadamard transform.
    """
    if isinstance(state, CompactState):
        return CompactState(state.inst, _walsh_hadamard(state.amps))
    state = _uncompute_max_load(state)
    state = _uncompute_load_sums(state)
    for i in range(state.inst.n_jobs):
        state = _toggle_time_fields(state, i)
        state = _hadamard_machine_field(state, i)
    return state


def _walsh_hadamard(vec: np.ndarray) -> np.ndarray:
    out = np.array(vec, dtype=np.complex128)
    n = out.size
    h = 1
    while h < n:
        blocks = out.reshape(n // (2 * h), 2, h)
        top = blocks[:, 0, :] + blocks[:, 1, :]
        bottom = blocks[:, 0, :] - blocks[:, 1, :]
        out = np.stack((top, bottom), axis=1).reshape(n)
        h *= 2
    return out / math.sqrt(n)


def schedule_index_of_value(value: int, inst: Instance) -> int:
    """Schedule index encoded in a full-register basis value."""
    lay = RegisterLayout.for_instance(inst)
    a = decode_schedule(_schedule_of_value(value, lay), inst)
    return assignment_to_index(a, inst)


def project_schedule_amplitudes(state: StateVector) -> CompactState:
    """Amplitude of each schedule index, read off the schedule register."""
    inst = state.inst
    arr = np.zeros(inst.sigma, dtype=np.complex128)
    seen = set()
    for v, amp in state.amps.items():
        try:
            k = schedule_index_of_value(v, inst)
        except InconsistentTimeField as exc:
            raise NonScheduleState(str(exc)) from exc
        if k in seen:
            raise NonScheduleState(f"two basis states encode schedule index {k}")
        seen.add(k)
        arr[k] = amp
    return CompactState(inst, arr)


def state_norm(state: State) -> float:
    if isinstance(state, CompactState):
        return float(np.linalg.norm(state.amps))
    return math.sqrt(sum(abs(state.amps[v]) ** 2 for v in sorted(state.amps)))


def makespan_register_value(value: int, lay: RegisterLayout) -> int:
    return _field(value, lay.total_width, *lay.makespan_field())


def _render_full_ket(value: int, inst: Instance) -> str:
    lay = RegisterLayout.for_instance(inst)
    sched = _schedule_of_value(value, lay)
    groups = []
    for i in range(inst.n_jobs):
        sub = BasisState(sched.field(lay.job_offset(i), lay.job_width), lay.job_width)
        groups.append(render_job_ket(sub, inst)[1:-1])
    for j in range(inst.n_machines):
        groups.append(format(_field(value, lay.total_width, *lay.load_field(j)),
                             f"0{lay.load_width}b"))
    groups.append(format(makespan_register_value(value, lay), f"0{lay.makespan_width}b"))
    return "|" + " ".join(groups) + ">"


def dump_lines(state: State) -> list[str]:
    """Debug dump: one `<ket> <re> <im>` line per basis state, ascending."""
    lines = []
    if isinstance(state, CompactState):
        width = max(1, state.inst.m_bits * state.inst.n_jobs)
        for k, amp in enumerate(state.amps):
            lines.append(f"|{k:0{width}b}> {amp.real:+.12e} {amp.imag:+.12e}")
    else:
        for v in sorted(state.amps):
            amp = state.amps[v]
            lines.append(
                f"{_render_full_ket(v, state.inst)} {amp.real:+.12e} {amp.imag:+.12e}"
            )
    return lines
