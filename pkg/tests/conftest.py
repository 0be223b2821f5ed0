from pathlib import Path

import pytest

from qsched.instance import Instance

REPO_ROOT = Path(__file__).resolve().parent.parent

# the worked 8-jobs-on-4-machines example: two reference schedules and the
# register contents they must produce
S1 = (0, 1, 0, 3, 2, 1, 2, 0)
S2 = (1, 0, 2, 3, 2, 1, 0, 1)
S1_LOADS = (8, 8, 6, 4)
S2_LOADS = (7, 20, 8, 4)
S1_KET = "|000001 010001 000110 110100 100011 010111 100011 000001>"
S2_KET = "|010011 000010 100101 110100 100011 010111 000101 011010>"
S1_LOAD_KETS = ("|0001000>", "|0001000>", "|0000110>", "|0000100>")
S2_LOAD_KETS = ("|0000111>", "|0010100>", "|0001000>", "|0000100>")
S1_MAKESPAN_KET = "|0001000>"
S2_MAKESPAN_KET = "|0010100>"
J1_KETS = ("|000001>", "|010011>", "|100111>", "|111111>")
J2_KETS = ("|000010>", "|010001>", "|101001>", "|110011>")


@pytest.fixture(scope="session")
def table1() -> Instance:
    return Instance.from_file(REPO_ROOT / "instances" / "table1.json")


@pytest.fixture(scope="session")
def small2x2() -> Instance:
    # 2 jobs, 2 machines; optimal makespan 1 with the unique schedule (M1, M2)
    return Instance.from_lists([[1, 2], [2, 1]], 2)
