"""Independent reference computations and instance generators for the tests.

Everything here deliberately avoids the library's own code paths: loads and
flow times are recomputed with plain loops, exhaustive enumeration uses
itertools.product instead of index arithmetic, and the amplification step is
rebuilt from explicit matrices.
"""

import itertools
import math

import numpy as np
from hypothesis import strategies as st

from qsched.instance import Instance


def naive_loads(a, inst):
    loads = [0] * inst.n_machines
    for job, machine in enumerate(a):
        loads[machine] += inst.times[job][machine]
    return tuple(loads)


def naive_flowtime(a, inst):
    total = 0
    for machine in range(inst.n_machines):
        queue = sorted(
            (inst.times[i][machine], i)
            for i in range(inst.n_jobs)
            if a[i] == machine
        )
        elapsed = 0
        for duration, _ in queue:
            elapsed += duration
            total += elapsed
    return total


def naive_metric(a, inst, metric):
    if metric == "makespan":
        return max(naive_loads(a, inst))
    return naive_flowtime(a, inst)


def all_assignments(inst):
    """Every assignment, ascending in schedule index (job 0 varies slowest)."""
    return itertools.product(range(inst.n_machines), repeat=inst.n_jobs)


def dense_reflection(sigma, phi=math.pi):
    """P S0(phi) P^{-1} from explicit matrices, P the normalized WHT."""
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)
    p = np.array([[1.0]])
    while p.shape[0] < sigma:
        p = np.kron(p, h)
    s0 = np.diag([1.0 + 0j] + [np.exp(1j * phi)] * (sigma - 1))
    return p @ s0 @ p  # the WHT is its own inverse


def dense_grover_step(amps, good_mask, phi=math.pi, varphi=math.pi):
    """One amplification step done entirely with dense matrices."""
    oracle = np.where(good_mask, np.exp(1j * varphi), 1.0 + 0j)
    return -(dense_reflection(len(amps), phi) @ (oracle * amps))


def random_instance(rng, max_sigma=4096, min_machines=2):
    """Seeded random instance with power-of-two dims and sigma <= max_sigma."""
    dims = [
        (n, m)
        for n in range(0, 4)
        for m in range(1, 4)
        if 2**m >= min_machines and (2**m) ** (2**n) <= max_sigma
    ]
    n, m = dims[int(rng.integers(len(dims)))]
    q = int(rng.integers(1, 5))
    times = rng.integers(0, 2**q, size=(2**n, 2**m))
    return Instance.from_lists(times.tolist(), q)


@st.composite
def instances(draw, max_sigma=256, max_q=3):
    dims = [
        (n, m)
        for n in range(0, 3)
        for m in range(0, 3)
        if (2**m) ** (2**n) <= max_sigma
    ]
    n, m = draw(st.sampled_from(dims))
    q = draw(st.integers(1, max_q))
    times = draw(
        st.lists(
            st.lists(st.integers(0, 2**q - 1), min_size=2**m, max_size=2**m),
            min_size=2**n,
            max_size=2**n,
        )
    )
    return Instance.from_lists(times, q)
