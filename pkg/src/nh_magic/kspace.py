"""Momentum-space magic of the staggered XX chain with periodic boundaries.

The momenta ``k`` and ``k - pi`` couple only to each other. Each pair lives in
the two-qubit space ``{|01>_k, |10>_k}``, where ``|01>_k`` means ``|0>`` on
``k - pi`` and ``|1>`` on ``k``. On that space the Hamiltonian is::

    H_k = 2 [[J cos k,        g + delta sin k],
             [g - delta sin k, -J cos k      ]]

The ground state is a product over sectors, so its M2 is the sum of the
two-qubit sector values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.optimize import brentq

from .magic import sre2_pure_many
from .model import XXParams, xx_band_energies

DEFECT_TOL = 1e-12


@dataclass(frozen=True)
class KGrid:
    L: int

    def __post_init__(self):
        if self.L < 2:
            raise ValueError("k-grid needs at least two momenta")

    @property
    def points(self) -> np.ndarray:
        """``k_n = pi n / L`` for ``n = 0..L-1``."""
        return np.pi * np.arange(self.L) / self.L

    @property
    def step(self) -> float:
        return math.pi / self.L


@dataclass
class SectorState:
    k: float
    alpha: complex
    beta: complex
    energy: complex
    defective: bool
    tie: bool = False

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta])


def hk_matrix(k: float, p: XXParams) -> np.ndarray:
    c, s = math.cos(k), math.sin(k)
    return 2 * np.array([[p.J * c, p.g + p.delta * s], [p.g - p.delta * s, -p.J * c]], dtype=complex)


def _sector_arrays(ks: np.ndarray, p: XXParams):
    """Vectorized sector ground states: ``(alpha, beta, energy, defective, tie)``."""
    ks = np.asarray(ks, dtype=float)
    a = 2 * p.J * np.cos(ks)
    b = 2 * (p.g + p.delta * np.sin(ks))
    c = 2 * (p.g - p.delta * np.sin(ks))
    scale = np.maximum.reduce([np.abs(a), np.abs(b), np.abs(c), np.ones_like(a)])
    disc = (a * a + b * c).astype(complex)
    root = np.sqrt(disc)
    # min Re: -root has Re <= 0; pure imaginary pairs prefer Im > 0
    tie = (np.abs(root.real) <= 1e-12 * scale) & (np.abs(root.imag) > 1e-12 * scale)
    lam = np.where(tie, 1j * np.abs(root.imag), -root)
    defective = (np.abs(disc) < DEFECT_TOL * scale**2) & ((np.abs(b) > DEFECT_TOL * scale) | (np.abs(c) > DEFECT_TOL * scale))
    zero = ~defective & (np.abs(disc) < DEFECT_TOL * scale**2)
    lam = np.where(defective | zero, 0.0, lam)

    # two candidate eigenvectors of [[a, b], [c, -a]] for eigenvalue lam
    v1 = np.stack([b, lam - a], axis=-1).astype(complex)
    v2 = np.stack([lam + a, c], axis=-1).astype(complex)
    n1 = np.linalg.norm(v1, axis=-1)
    n2 = np.linalg.norm(v2, axis=-1)
    vec = np.where((n1 >= n2)[:, None], v1, v2)
    norm = np.maximum(n1, n2)
    # H_k = 0: every vector is an eigenvector, take the basis state |01>
    vec = np.where((norm == 0)[:, None], np.array([1.0, 0.0], dtype=complex), vec)
    vec /= np.linalg.norm(vec, axis=-1, keepdims=True)
    pivot = np.where(np.abs(vec[:, 0]) >= np.abs(vec[:, 1]), vec[:, 0], vec[:, 1])
    vec *= (np.abs(pivot) / pivot)[:, None]
    return vec[:, 0], vec[:, 1], lam, defective, tie


def sector_ground_state(k: float, p: XXParams) -> SectorState:
    alpha, beta, lam, defective, tie = _sector_arrays(np.array([k]), p)
    return SectorState(float(k), complex(alpha[0]), complex(beta[0]), complex(lam[0]), bool(defective[0]), bool(tie[0]))


def _two_qubit_states(alpha, beta) -> np.ndarray:
    # qubit 0 is k - pi, qubit 1 is k: |01>_k -> index 2, |10>_k -> index 1
    states = np.zeros((np.size(alpha), 4), dtype=complex)
    states[:, 2] = alpha
    states[:, 1] = beta
    return states


def sector_magic(s: SectorState) -> float:
    return float(sre2_pure_many(_two_qubit_states([s.alpha], [s.beta]))[0])


def momentum_resolved_magic(p: XXParams, grid: KGrid):
    """Per-momentum sector magic as ``(k, magic)`` arrays."""
    ks = grid.points
    alpha, beta, *_ = _sector_arrays(ks, p)
    return ks, sre2_pure_many(_two_qubit_states(alpha, beta))


def total_magic_density(p: XXParams, grid: KGrid) -> float:
    """Ground-state M2 divided by the number of momenta."""
    _, magic = momentum_resolved_magic(p, grid)
    return float(magic.mean())


def sector_polarization(k: float, p: XXParams) -> float:
    """``|alpha|^2 - |beta|^2``: the z component of the effective sector qubit."""
    alpha, beta, *_ = _sector_arrays(np.array([k]), p)
    return float(abs(alpha[0]) ** 2 - abs(beta[0]) ** 2)


def stabilizer_momenta(p: XXParams, samples: int = 4096, tol: float = 1e-14):
    """Momenta in ``(0, pi/2)`` where the sector qubit lies along x.

    These are the zeros of the z polarization, located by sign change on a
    fine mesh and refined with Brent's method.
    """
    ks = np.linspace(0.0, math.pi / 2, samples + 1)[1:-1]
    alpha, beta, *_ = _sector_arrays(ks, p)
    d = np.abs(alpha) ** 2 - np.abs(beta) ** 2
    sign = np.sign(d)
    roots = [float(k) for k in ks[sign == 0]]
    for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
        roots.append(brentq(sector_polarization, ks[i], ks[i + 1], args=(p,), xtol=tol))
    return sorted(roots)


def band_energies_match(k: float, p: XXParams) -> float:
    """Largest mismatch between the eigenvalues of ``H_k`` and the closed-form bands."""
    ev = np.linalg.eigvals(hk_matrix(k, p))
    bands = np.array(xx_band_energies(k, p))
    gap = np.abs(ev[:, None] - bands[None, :])
    return float(max(gap.min(axis=1).max(), gap.min(axis=0).max()))


def saturation_integrand(k):
    return -np.log2((1 + np.sin(k) ** 4 + np.cos(k) ** 4) / 2) / np.pi


def exceptional_line_limit() -> float:
    """Magic density on ``g = delta`` as ``g -> infinity``: ``log2(112 - 64 sqrt 3)``."""
    return math.log2(112 - 64 * math.sqrt(3))


def exceptional_line_quadrature() -> float:
    """The same limit by adaptive quadrature of the per-momentum integrand."""
    value, _ = quad(saturation_integrand, 0.0, math.pi, epsabs=1e-13, epsrel=1e-13)
    return value
