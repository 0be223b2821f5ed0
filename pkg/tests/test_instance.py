import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import S1, S1_LOADS, S2, S2_LOADS
from helpers import all_assignments, instances, naive_flowtime, naive_loads
from qsched.errors import InputFormatError
from qsched.instance import (
    Instance,
    assignment_to_index,
    format_assignment,
    index_to_assignment,
    machine_loads,
    makespan,
    metric_upper_bound,
    total_flowtime,
)


class TestInstanceValidation:
    def test_dimensions_and_widths(self, table1):
        assert (table1.n_jobs, table1.n_machines) == (8, 4)
        assert (table1.n_bits, table1.m_bits, table1.q_bits) == (3, 2, 4)
        assert table1.sigma == 65536

    def test_rejects_non_power_of_two(self):
        with pytest.raises(InputFormatError, match="power of two"):
            Instance.from_lists([[1, 2, 3]], 2)
        with pytest.raises(InputFormatError, match="power of two"):
            Instance.from_lists([[1], [2], [3]], 2)

    def test_rejects_out_of_range_times(self):
        with pytest.raises(InputFormatError, match="out of range"):
            Instance.from_lists([[4]], 2)
        with pytest.raises(InputFormatError, match="out of range"):
            Instance.from_lists([[-1]], 2)

    def test_rejects_ragged_matrix(self):
        with pytest.raises(InputFormatError, match="rectangular"):
            Instance.from_lists([[1, 2], [3]], 2)

    def test_zero_times_allowed(self):
        inst = Instance.from_lists([[0, 1]], 1)
        assert machine_loads((0,), inst) == (0, 0)

    def test_degenerate_single_job_single_machine(self):
        inst = Instance.from_lists([[3]], 2)
        assert inst.sigma == 1
        assert (inst.n_bits, inst.m_bits) == (0, 0)

    def test_from_json_dict_rejects_junk(self):
        with pytest.raises(InputFormatError):
            Instance.from_json_dict(["not", "an", "object"])
        with pytest.raises(InputFormatError):
            Instance.from_json_dict({"times": [[1]]})
        with pytest.raises(InputFormatError):
            Instance.from_json_dict({"q_bits": "two", "times": [[1]]})


class TestLoadsAndMakespan:
    def test_worked_schedule_one(self, table1):
        loads = machine_loads(S1, table1)
        assert loads == (8, 8, 6, 4)
        assert makespan(loads) == 8

    def test_worked_schedule_two(self, table1):
        loads = machine_loads(S2, table1)
        assert loads == (7, 20, 8, 4)
        assert makespan(loads) == 20

    def test_all_jobs_on_first_machine(self, table1):
        column_sum = sum(row[0] for row in table1.times)
        assert column_sum == 51
        loads = machine_loads((0,) * 8, table1)
        assert loads == (51, 0, 0, 0)

    def test_makespan_of_zero_loads(self):
        assert makespan((0, 0, 0, 0)) == 0
        assert makespan(S1_LOADS) == 8
        assert makespan(S2_LOADS) == 20


class TestFlowtime:
    def test_two_jobs_one_machine(self):
        inst = Instance.from_lists([[1, 2], [2, 1]], 2)
        # SPT on machine 0: job 0 (t=1) then job 1 (t=2) -> 1 + 3
        assert total_flowtime((0, 0), inst) == 4

    def test_each_job_alone(self, table1):
        a = (0, 1, 2, 3, 0, 1, 2, 3)
        # at most two jobs share a machine here; recompute independently
        assert total_flowtime(a, table1) == naive_flowtime(a, table1)

    def test_worked_schedule_prefix_sums(self, table1):
        # M1 queue (1,1,6) -> 1+2+8, M2 (1,7) -> 1+8, M3 (3,3) -> 3+6, M4 (4)
        assert naive_flowtime(S1, table1) == 33
        assert total_flowtime(S1, table1) == 33

    def test_spt_tie_breaks_by_job_index(self):
        inst = Instance.from_lists([[2, 3], [2, 3]], 2)
        # equal times: order is job 0 then job 1 either way
        assert total_flowtime((0, 0), inst) == 2 + 4


class TestIndexBijection:
    def test_zero_index(self, table1):
        assert index_to_assignment(0, table1) == (0,) * 8

    def test_positional_expansion(self):
        inst = Instance.from_lists([[1, 1, 1, 1], [1, 1, 1, 1]], 1)
        assert index_to_assignment(7, inst) == (1, 3)

    def test_round_trip_exhaustive_2x2(self, small2x2):
        for k in range(small2x2.sigma):
            assert assignment_to_index(index_to_assignment(k, small2x2), small2x2) == k

    def test_matches_product_order(self, small2x2):
        listed = [index_to_assignment(k, small2x2) for k in range(small2x2.sigma)]
        assert listed == list(all_assignments(small2x2))

    def test_out_of_range_rejected(self, small2x2):
        with pytest.raises(ValueError):
            index_to_assignment(4, small2x2)
        with pytest.raises(ValueError):
            index_to_assignment(-1, small2x2)

    @settings(max_examples=60)
    @given(data=st.data(), inst=instances())
    def test_round_trip_property(self, data, inst):
        k = data.draw(st.integers(0, inst.sigma - 1))
        assert assignment_to_index(index_to_assignment(k, inst), inst) == k


class TestMetricBounds:
    @settings(max_examples=60)
    @given(data=st.data(), inst=instances())
    def test_makespan_bounds_and_register_fit(self, data, inst):
        k = data.draw(st.integers(0, inst.sigma - 1))
        a = index_to_assignment(k, inst)
        loads = machine_loads(a, inst)
        assert loads == naive_loads(a, inst)
        picked = [inst.times[i][j] for i, j in enumerate(a)]
        assert max(picked) <= makespan(loads) <= sum(picked)
        for load in loads:
            assert load < (1 << (inst.n_bits + inst.q_bits))

    def test_upper_bounds(self, table1):
        assert metric_upper_bound(table1, "makespan") == 127
        assert metric_upper_bound(table1, "flowtime") == (1 << 10) - 1


def test_assignment_rendering():
    assert format_assignment((0, 1, 3)) == "[M1, M2, M4]"
