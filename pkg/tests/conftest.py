"""Shared fixtures and independent reference builders.

The dense builders here go through explicit Kronecker products, so they do
not share the bit-manipulation code used by :mod:`nh_magic.model`.
"""

from functools import reduce

import numpy as np
import pytest

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Z = np.array([[-1, 0], [0, 1]], dtype=complex)  # sigma^z |0> = -|0>
Y = 1j * X @ Z
SP = (X + 1j * Y) / 2
SM = (X - 1j * Y) / 2

ACCEPTANCE_LINES = []


def site_op(op, s, L):
    """``op`` on site ``s`` (bit ``s``); kron's first factor is the top bit."""
    return reduce(np.kron, [op if t == s else I2 for t in reversed(range(L))])


def dense_nhti(L, J, h, gamma):
    H = sum(-J * site_op(X, s, L) @ site_op(X, s + 1, L) for s in range(L - 1))
    return H + sum(h * (site_op(Z, s, L) + 1j * gamma * site_op(Y, s, L)) for s in range(L))


def dense_xx(L, J, g, delta):
    H = np.zeros((2**L, 2**L), dtype=complex)
    for s in range(L - 1):
        amp = J + 1j * (-1) ** (s + 1) * delta
        H += amp * (site_op(SP, s, L) @ site_op(SM, s + 1, L) + site_op(SM, s, L) @ site_op(SP, s + 1, L))
    for s in range(L):
        H += g * (-1) ** (s + 1) * site_op(Z, s, L)
    return H


def random_state(rng, L):
    v = rng.standard_normal(2**L) + 1j * rng.standard_normal(2**L)
    return v / np.linalg.norm(v)


def product_state(single_site_states):
    """Tensor product with the first entry on site 0."""
    return reduce(np.kron, list(reversed(single_site_states)))


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
