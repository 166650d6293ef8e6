"""Sparse Hamiltonians of the two non-Hermitian chains and closed-form helpers.

Both chains use open boundary conditions. Sites are numbered ``j = 1..L`` in
the formulas below and stored as bits ``j - 1`` of the basis index (see
:mod:`nh_magic.pauli` for the qubit convention).

NHTI (non-Hermitian transverse-field Ising)::

    H = -J sum_{j<L} X_j X_{j+1} + h sum_j (Z_j + i gamma Y_j)

Staggered XX chain::

    H = sum_{j<L} [J + i (-1)^j delta] (S+_j S-_{j+1} + S-_j S+_{j+1})
        + g sum_j (-1)^j Z_j

The XX chain is also the Jordan-Wigner image of spinless fermions with
hopping ``J + i (-1)^j delta`` and on-site potential ``2 g (-1)^j``.
With open boundaries it is PT-symmetric only for odd ``L``; for even ``L`` the
edges leave a complex spectrum for every ``g``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class IsingParams:
    L: int
    h: float
    gamma: float = 0.0
    J: float = 1.0

    def __post_init__(self):
        if self.L < 2:
            raise ValueError(f"L must be >= 2, got {self.L}")
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J}")


@dataclass(frozen=True)
class XXParams:
    L: int
    g: float
    delta: float = 0.0
    J: float = 1.0

    def __post_init__(self):
        if self.L < 2:
            raise ValueError(f"L must be >= 2, got {self.L}")
        if not self.J > 0:
            raise ValueError(f"J must be positive, got {self.J}")


def _coo_to_csr(rows, cols, vals, dim):
    rows = np.concatenate(rows)
    cols = np.concatenate(cols)
    vals = np.concatenate(vals).astype(complex)
    H = sp.csr_matrix((vals, (rows, cols)), shape=(dim, dim))
    H.sum_duplicates()
    H.eliminate_zeros()
    return H


def build_nhti(p: IsingParams) -> sp.csr_matrix:
    """Sparse NHTI Hamiltonian with open boundaries."""
    L, dim = p.L, 1 << p.L
    basis = np.arange(dim)
    bits = [(basis >> s) & 1 for s in range(L)]
    rows, cols, vals = [], [], []

    rows.append(basis)
    cols.append(basis)
    vals.append(p.h * sum(2 * b - 1 for b in bits).astype(float))

    for s in range(L - 1):
        rows.append(basis ^ (3 << s))
        cols.append(basis)
        vals.append(np.full(dim, -p.J))

    if p.gamma != 0.0:
        # i gamma h Y|b> = gamma h (1 - 2 b_s) |b ^ e_s>
        for s in range(L):
            rows.append(basis ^ (1 << s))
            cols.append(basis)
            vals.append(p.gamma * p.h * (1 - 2 * bits[s]).astype(float))

    return _coo_to_csr(rows, cols, vals, dim)


def build_xx_spin(p: XXParams) -> sp.csr_matrix:
    """Sparse staggered XX Hamiltonian with open boundaries; conserves total Z."""
    L, dim = p.L, 1 << p.L
    basis = np.arange(dim)
    bits = [(basis >> s) & 1 for s in range(L)]
    rows, cols, vals = [], [], []

    stagger = [(-1) ** (s + 1) for s in range(L)]
    rows.append(basis)
    cols.append(basis)
    vals.append(p.g * sum(st * (2 * b - 1) for st, b in zip(stagger, bits)).astype(float))

    for s in range(L - 1):
        amp = p.J + 1j * stagger[s] * p.delta
        movable = np.nonzero(bits[s] != bits[s + 1])[0]
        rows.append(movable ^ (3 << s))
        cols.append(movable)
        vals.append(np.full(movable.size, amp))

    return _coo_to_csr(rows, cols, vals, dim)


def build_hamiltonian(params) -> sp.csr_matrix:
    if isinstance(params, IsingParams):
        return build_nhti(params)
    if isinstance(params, XXParams):
        return build_xx_spin(params)
    raise TypeError(f"no Hamiltonian for {type(params).__name__}")


def xx_band_energies(k, p: XXParams):
    """Bands ``E_pm(k) = +-2 sqrt((J^2 + delta^2) cos^2 k + g^2 - delta^2)``.

    Uses the principal complex square root, so ``E_+`` has non-negative real
    part and becomes ``+2i sqrt(...)`` when the radicand is negative.
    """
    radicand = (p.J**2 + p.delta**2) * np.cos(k) ** 2 + p.g**2 - p.delta**2
    root = 2 * np.sqrt(np.asarray(radicand, dtype=complex))
    if np.ndim(root) == 0:
        root = complex(root)
    return root, -root


def ising_critical_gamma(h: float, J: float = 1.0) -> float | None:
    """Non-Hermiticity at which the PT-symmetric Ising transition sits.

    Returns ``sqrt(1 - (J/h)^2)`` for ``|h| >= J`` and ``None`` otherwise.
    """
    if h == 0:
        raise ValueError("h = 0 has no Ising transition")
    ratio = (J / h) ** 2
    if ratio > 1:
        return None
    return math.sqrt(1 - ratio)


def effective_hermitian_field(h: float, gamma: float) -> float:
    """Transverse field of the Hermitian chain similar to the NHTI at ``|gamma| <= 1``."""
    if abs(gamma) > 1:
        raise ValueError(f"|gamma| = {abs(gamma)} > 1: no real similarity transformation")
    return h * math.sqrt(1 - gamma**2)
