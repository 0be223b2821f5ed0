"""Amplitude-amplified schedule search for unrelated parallel machines.

The pipeline encodes every job-to-machine assignment in fixed-width quantum
registers, prepares the uniform superposition of all M**N schedules together
with their per-machine loads and makespan, and amplifies the schedules whose
metric falls in a requested window. An exhaustive classical enumerator
provides exact solution counts and verifies every measured result.
"""

from .bruteforce import MetricHistogram, count_solutions, enumerate_metrics, optimum
from .driver import (
    IntersectionResult,
    MinimizeResult,
    SweepRow,
    intersect_measures,
    minimize,
    sweep,
)
from .encoding import (
    BasisState,
    RegisterLayout,
    decode_schedule,
    encode_job_machine,
    job_superposition,
    schedule_basis,
)
from .instance import (
    Assignment,
    Instance,
    assignment_to_index,
    index_to_assignment,
    machine_loads,
    makespan,
    total_flowtime,
)
from .search import (
    Predicate,
    SearchParams,
    SearchReport,
    apply_diffusion,
    apply_oracle,
    good_mass,
    grover_iteration,
    iteration_count,
    measure,
    run_search,
    success_probability,
)
from .simulator import (
    CompactState,
    StateVector,
    apply_load_sums,
    apply_max_load,
    invert_preparation,
    prepare_state,
    project_schedule_amplitudes,
    superpose_schedules,
)

__all__ = [
    "Assignment",
    "BasisState",
    "CompactState",
    "Instance",
    "IntersectionResult",
    "MetricHistogram",
    "MinimizeResult",
    "Predicate",
    "RegisterLayout",
    "SearchParams",
    "SearchReport",
    "StateVector",
    "SweepRow",
    "apply_diffusion",
    "apply_load_sums",
    "apply_max_load",
    "apply_oracle",
    "assignment_to_index",
    "count_solutions",
    "decode_schedule",
    "encode_job_machine",
    "enumerate_metrics",
    "good_mass",
    "grover_iteration",
    "index_to_assignment",
    "intersect_measures",
    "invert_preparation",
    "iteration_count",
    "job_superposition",
    "machine_loads",
    "makespan",
    "measure",
    "minimize",
    "optimum",
    "prepare_state",
    "project_schedule_amplitudes",
    "run_search",
    "schedule_basis",
    "success_probability",
    "superpose_schedules",
    "sweep",
    "total_flowtime",
]
