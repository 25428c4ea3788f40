import numpy as np
import pytest

from permpos.permutations import Permutation


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


def random_perm(rng, n):
    return Permutation(tuple(int(v) + 1 for v in rng.permutation(n)))


FIVE_POINT_PAIR = (Permutation((2, 3, 4, 5, 1)), Permutation((1, 5, 3, 2, 4)))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
