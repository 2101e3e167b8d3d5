import numpy as np
import pytest

from htcp.solver import SolverConfig
from htcp.tensor import Tensor, identity_tensor


def odd_p_pair():
    """The T(3,2) pair a111 = a122 = 1, b111 = b122 = -1 (0-based indices)."""
    A = Tensor.from_entries(3, 2, [((0, 0, 0), 1.0), ((0, 1, 1), 1.0)])
    B = Tensor.from_entries(3, 2, [((0, 0, 0), -1.0), ((0, 1, 1), -1.0)])
    return A, B


def naive_power(T, x):
    """Triple-loop style reference for T x^{m-1}, independent of the kernels."""
    import itertools

    T = np.asarray(T)
    m, n = T.ndim, T.shape[0]
    out = np.zeros(n)
    for idx in itertools.product(range(n), repeat=m):
        prod = T[idx]
        for j in idx[1:]:
            prod *= x[j]
        out[idx[0]] += prod
    return out


@pytest.fixture
def cfg():
    return SolverConfig()


@pytest.fixture
def I4():
    return identity_tensor(4, 2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES = []


def report_criterion(label, ok, detail=""):
    """Print and record one acceptance line; the caller asserts ``ok`` afterwards."""
    line = f"acceptance {label}: {'PASS' if ok else 'FAIL'}" + (f" ({detail})" if detail else "")
    print(line)
    ACCEPTANCE_LINES.append(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
