"""Amplitude amplification over the prepared scheduling state.

One amplification step is the composition of two reflections with a global
minus sign: first the oracle multiplies the amplitude of every Good basis
state (metric inside the predicate window) by e^{i*varphi}; then the
diffusion applies -(P S0(phi) P^{-1}), where P is the preparation and S0
phases everything except the all-zeros register by e^{i*phi}. Since
S0(phi) = e^{i*phi} I + (1 - e^{i*phi}) |0><0|, conjugating by P gives the
closed form

    P S0(phi) P^{-1} = e^{i*phi} I + (1 - e^{i*phi}) |u><u|

with |u> the prepared uniform state, which is how the diffusion is applied
on both backends (no round trip through the inverse preparation is needed).
With phi = varphi = pi both reflections are real sign flips and the step
rotates the state by 2*theta toward the Good subspace, sin^2(theta) =
count/sigma; the global minus is kept literally so both backends produce
bit-comparable amplitudes.

With the default phases, starting from uniform and iterating R times, the
probability that a measurement yields a Good schedule is
sin^2((2R+1)*theta).

Measurement collapses: `run_search` samples one schedule index and verifies
it classically. Amplitude inspection (`good_mass`) exists for analytics and
tests only and is never consulted by the algorithmic path.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import bruteforce
from .encoding import BasisState, RegisterLayout, decode_schedule
from .errors import (
    AdaptiveCutoffExceeded,
    NonScheduleState,
    NoSolution,
    ZeroCount,
)
from .instance import (
    Assignment,
    Instance,
    Metric,
    METRICS,
    index_to_assignment,
    metric_upper_bound,
    metric_value,
    total_flowtime,
)
from .simulator import (
    CompactState,
    State,
    StateVector,
    _prepared_basis_set,
    makespan_register_value,
    prepare_state,
    prepared_basis_values,
    schedule_index_of_value,
)

Mode = Literal["exact", "adaptive"]

# Budget for the unknown-count search: total amplification steps before
# giving up, and a round cap so zero-step rounds cannot loop forever.
ADAPTIVE_CUTOFF_FACTOR = 3.0
ADAPTIVE_GROWTH = 6.0 / 5.0


@dataclass(frozen=True)
class Predicate:
    """Accept schedules whose metric lies in the inclusive window [lo, hi]."""

    metric: Metric
    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.metric not in METRICS:
            raise ValueError(f"unknown metric {self.metric!r}")
        if not 0 <= self.lo <= self.hi:
            raise ValueError(f"need 0 <= lo <= hi, got [{self.lo}, {self.hi}]")

    def validate_for(self, inst: Instance) -> None:
        bound = metric_upper_bound(inst, self.metric)
        if self.hi > bound:
            raise ValueError(
                f"{self.metric} window reaches {self.hi}, register bound is {bound}"
            )

    def matches(self, value: int) -> bool:
        return self.lo <= value <= self.hi

    @classmethod
    def point(cls, metric: Metric, value: int) -> "Predicate":
        return cls(metric, value, value)

    @classmethod
    def full_range(cls, inst: Instance, metric: Metric) -> "Predicate":
        return cls(metric, 0, metric_upper_bound(inst, metric))


@dataclass(frozen=True)
class SearchParams:
    phi: float = math.pi
    varphi: float = math.pi
    iterations: int | None = None
    mode: Mode = "exact"
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.phi <= math.pi or not 0.0 <= self.varphi <= math.pi:
            raise ValueError("phases must lie in [0, pi]")
        if self.iterations is not None and self.iterations < 0:
            raise ValueError("iterations must be >= 0")
        if self.mode not in ("exact", "adaptive"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass(frozen=True)
class SearchReport:
    sigma: int
    solution_count: int | None
    theta: float | None
    iterations_run: int
    predicted_success: float | None
    measured_index: int
    measured_assignment: Assignment
    verified: bool
    metric_value: int


def _unit_phase(angle: float) -> complex:
    # exact at the two endpoints so sign flips stay sign flips
    if angle == 0.0:
        return 1.0 + 0.0j
    if angle == math.pi:
        return -1.0 + 0.0j
    return cmath.exp(1j * angle)


def _basis_metric(value: int, inst: Instance, metric: Metric) -> int:
    """Metric of one full-register basis state.

    The makespan is read straight off its register, which is all the oracle
    ever looks at for the primary problem; other metrics are evaluated from
    the schedule register.
    """
    lay = RegisterLayout.for_instance(inst)
    if metric == "makespan":
        return makespan_register_value(value, lay)
    sched = value >> (lay.loads_width + lay.makespan_width)
    a = decode_schedule(BasisState(sched, lay.schedule_width), inst)
    return total_flowtime(a, inst)


def apply_oracle(state: State, pred: Predicate, varphi: float = math.pi) -> State:
    """Phase the Good states by e^{i*varphi}; leave Bad states untouched."""
    phase = _unit_phase(varphi)
    if isinstance(state, CompactState):
        values = bruteforce.metric_values(state.inst, pred.metric)
        good = (values >= pred.lo) & (values <= pred.hi)
        amps = state.amps.copy()
        amps[good] *= phase
        return CompactState(state.inst, amps)
    new = {}
    for v, amp in state.amps.items():
        if pred.matches(_basis_metric(v, state.inst, pred.metric)):
            amp = amp * phase
        new[v] = amp
    return StateVector(state.inst, new)


def apply_diffusion(state: State, phi: float = math.pi) -> State:
    """Apply -(P S0(phi) P^{-1}) about the prepared uniform state."""
    phase = _unit_phase(phi)
    sigma = state.inst.sigma
    inv_root = 1.0 / math.sqrt(sigma)
    if isinstance(state, CompactState):
        overlap = state.amps.sum() * inv_root
        new = -(phase * state.amps + (1.0 - phase) * overlap * inv_root)
        return CompactState(state.inst, new)
    support = _prepared_basis_set(state.inst)
    for v in state.amps:
        if v not in support:
            raise NonScheduleState(
                "state has support outside the prepared schedule subspace"
            )
    # accumulate in schedule-index order with the same pairwise summation the
    # compact backend uses, so the two backends agree exactly
    ordered = prepared_basis_values(state.inst)
    arr = np.array([state.amps.get(v, 0j) for v in ordered], dtype=np.complex128)
    overlap = arr.sum() * inv_root
    out = -(phase * arr + (1.0 - phase) * overlap * inv_root)
    return StateVector(state.inst, dict(zip(ordered, out.tolist())))


def grover_iteration(
    state: State,
    pred: Predicate,
    phi: float = math.pi,
    varphi: float = math.pi,
) -> State:
    """One amplification step: oracle, then diffusion (with its global minus)."""
    return apply_diffusion(apply_oracle(state, pred, varphi), phi)


def success_probability(iterations: int, sigma: int, count: int) -> float:
    """Probability of measuring a Good state after the given iteration count."""
    if count == 0:
        return 0.0
    theta = math.asin(math.sqrt(count / sigma))
    return math.sin((2 * iterations + 1) * theta) ** 2


def iteration_count(sigma: int, count: int) -> int:
    """Iteration count maximizing the success probability near (pi/4)*sqrt(sigma/count).

    Takes the argmax among the floor estimate and its neighbors; ties go to
    fewer iterations. When Good states are at least half the space the best
    answer can be zero iterations (measure immediately).
    """
    if count <= 0:
        raise ZeroCount("iteration count needs a positive solution count")
    if count > sigma:
        raise ValueError(f"count {count} exceeds sigma {sigma}")
    estimate = int((math.pi / 4.0) * math.sqrt(sigma / count))
    best_r, best_p = None, -1.0
    for r in sorted({max(0, estimate - 1), estimate, estimate + 1}):
        p = success_probability(r, sigma, count)
        if p > best_p + 1e-15:
            best_r, best_p = r, p
    return best_r


def _index_probabilities(state: State) -> tuple[np.ndarray, list[int] | None]:
    """Probability vector plus, for the full backend, the ordered basis values."""
    if isinstance(state, CompactState):
        p = np.abs(state.amps) ** 2
        return p, None
    keys = sorted(state.amps)
    p = np.array([abs(state.amps[v]) ** 2 for v in keys])
    return p, keys


def measure(state: State, rng: np.random.Generator) -> int:
    """Sample one schedule index with probability |amplitude|^2."""
    return int(sample_indices(state, rng, 1)[0])


def sample_indices(state: State, rng: np.random.Generator, size: int) -> np.ndarray:
    """Repeated independent measurements of the same state (analytics/tests)."""
    p, keys = _index_probabilities(state)
    cum = np.cumsum(p)
    draws = rng.random(size) * cum[-1]
    pos = np.searchsorted(cum, draws, side="right")
    pos = np.minimum(pos, len(cum) - 1)
    if keys is None:
        return pos.astype(np.int64)
    return np.array(
        [schedule_index_of_value(keys[int(i)], state.inst) for i in pos],
        dtype=np.int64,
    )


def good_mass(state: State, pred: Predicate) -> float:
    """Total probability currently on Good states. Test/analytics API only."""
    if isinstance(state, CompactState):
        values = bruteforce.metric_values(state.inst, pred.metric)
        good = (values >= pred.lo) & (values <= pred.hi)
        return float((np.abs(state.amps[good]) ** 2).sum())
    total = 0.0
    for v in sorted(state.amps):
        if pred.matches(_basis_metric(v, state.inst, pred.metric)):
            total += abs(state.amps[v]) ** 2
    return total


def _verify(k: int, inst: Instance, pred: Predicate) -> tuple[Assignment, int, bool]:
    a = index_to_assignment(k, inst)
    value = metric_value(a, inst, pred.metric)
    return a, value, pred.matches(value)


def run_search(
    inst: Instance,
    pred: Predicate,
    params: SearchParams = SearchParams(),
    backend: str = "compact",
) -> SearchReport:
    """Prepare, amplify, measure once, and verify classically.

    Exact-count mode takes the solution count from the exhaustive oracle and
    runs the closed-form iteration count (or an explicitly forced one).
    Adaptive mode assumes nothing: it guesses iteration counts by randomized
    doubling and keeps measuring until a verified hit, with total work
    O(sqrt(sigma/count)) in expectation, or raises after the budget.
    """
    pred.validate_for(inst)
    rng = np.random.default_rng(params.rng_seed)
    sigma = inst.sigma

    if params.mode == "exact":
        count = bruteforce.count_solutions(inst, pred)
        if count == 0:
            raise NoSolution(
                f"no schedule has {pred.metric} in [{pred.lo}, {pred.hi}]"
            )
        iterations = (
            params.iterations
            if params.iterations is not None
            else iteration_count(sigma, count)
        )
        state = prepare_state(inst, backend)
        for _ in range(iterations):
            state = grover_iteration(state, pred, params.phi, params.varphi)
        k = measure(state, rng)
        assignment, value, ok = _verify(k, inst, pred)
        return SearchReport(
            sigma=sigma,
            solution_count=count,
            theta=math.asin(math.sqrt(count / sigma)),
            iterations_run=iterations,
            predicted_success=success_probability(iterations, sigma, count),
            measured_index=k,
            measured_assignment=assignment,
            verified=ok,
            metric_value=value,
        )

    if params.iterations is not None:
        raise ValueError("explicit iteration counts require exact mode")
    root_sigma = math.sqrt(sigma)
    cutoff = ADAPTIVE_CUTOFF_FACTOR * root_sigma
    max_rounds = max(32, 3 * math.ceil(root_sigma))
    guess = 1.0
    total = 0
    for _ in range(max_rounds):
        j = int(rng.integers(0, max(1, math.ceil(guess))))
        if total + j > cutoff:
            raise AdaptiveCutoffExceeded(
                f"spent {total} iterations without a verified schedule"
            )
        state = prepare_state(inst, backend)
        for _ in range(j):
            state = grover_iteration(state, pred, params.phi, params.varphi)
        total += j
        k = measure(state, rng)
        assignment, value, ok = _verify(k, inst, pred)
        if ok:
            return SearchReport(
                sigma=sigma,
                solution_count=None,
                theta=None,
                iterations_run=total,
                predicted_success=None,
                measured_index=k,
                measured_assignment=assignment,
                verified=True,
                metric_value=value,
            )
        guess = min(guess * ADAPTIVE_GROWTH, root_sigma)
    raise AdaptiveCutoffExceeded(
        f"no verified schedule after {max_rounds} measurement rounds"
    )
