from fractions import Fraction
from functools import reduce
from itertools import product

import numpy as np
import pytest

from ctnorm.states import basis_ket, from_ket

CYCLE4 = np.array([[0, 1, 0, 1],
                   [1, 0, 1, 0],
                   [0, 1, 0, 1],
                   [1, 0, 1, 0]])

ACCEPTANCE_LINES = []


def brute_element(rho, basis, idx):
    """Tr[rho (x) g_i] through an explicit Kronecker product."""
    op = reduce(np.kron, [basis[i] for i in idx])
    return np.trace(rho.data @ op)


def brute_subset_norm(rho, basis, alpha):
    """Sum of squared elements with non-identity generators exactly on alpha,
    taken from the full state (no partial trace involved)."""
    d2 = basis.d ** 2
    ranges = [range(1, d2) if p + 1 in alpha else (0,) for p in range(rho.n)]
    return sum(brute_element(rho, basis, idx).real ** 2 for idx in product(*ranges))


def compositions(n, k):
    """All ordered ways to write n as a sum of k positive integers."""
    if k == 1:
        yield (n,)
        return
    for first in range(1, n - k + 2):
        for rest in compositions(n - first, k - 1):
            yield (first,) + rest


def brute_max(f, n, k):
    best = None
    for c in compositions(n, k):
        v = Fraction(1)
        for m in c:
            v *= f(m)
        best = v if best is None or v > best else best
    return best


def psi1():
    terms = [(0, 0, 0), (1, 1, 1), (0, 1, 2), (1, 0, 2), (1, 2, 0), (0, 2, 1)]
    return from_ket(sum(basis_ket(t, 3) for t in terms), 3, 3)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def acceptance():
    def record(num, text, ok):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {text}")
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
