"""Exact stabilizer 2-Renyi entropy by enumerating every Pauli string.

For a Pauli string with flip mask ``x`` and phase mask ``z``,
``P|b> = w(x, z) (-1)^{z.b} |b ^ x>``. So for fixed ``x`` the coefficients
``Tr(rho P)`` over all ``z`` form a Walsh-Hadamard transform of the
``x``-th off-diagonal ``rho[b, b ^ x]``. All ``4^l`` coefficients then cost
``O(l 4^l)``, and no Pauli matrix is ever built.

The entropy is normalized by the purity::

    M2 = -log2( sum_P c_P^4 / sum_P c_P^2 )

which is the usual stabilizer Renyi entropy for pure states and zero on
stabilizer states.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import PauliString, num_qubits
from .rdm import ReducedDensityMatrix, as_region, purity, reduced_density_matrix

ENUMERATION_CAP = 8
PURE_ENUMERATION_CAP = 12


class EnumerationTooLarge(ValueError):
    """Region too long for exact enumeration; use :mod:`nh_magic.sampler`."""


def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalized Walsh-Hadamard transform along the last axis (returns a copy)."""
    a = np.array(a, copy=True)
    n = a.shape[-1]
    lead = a.shape[:-1]
    h = 1
    while h < n:
        v = a.reshape(lead + (n // (2 * h), 2, h))
        top = v[..., 0, :].copy()
        v[..., 0, :] += v[..., 1, :]
        v[..., 1, :] = top - v[..., 1, :]
        h *= 2
    return a


def _prefactors(ell: int) -> np.ndarray:
    masks = np.arange(1 << ell)
    xz = np.bitwise_count(masks[:, None] & masks[None, :]).astype(np.int64) % 4
    zz = np.bitwise_count(masks).astype(np.int64) % 2
    return (1j ** xz) * (1 - 2 * zz)[None, :]


@dataclass
class PauliSpectrum:
    """All coefficients ``c_P = Tr(rho P)``, stored as ``coefficients[x_mask, z_mask]``."""

    length: int
    coefficients: np.ndarray

    def __getitem__(self, p: PauliString) -> float:
        return float(self.coefficients[p.x_mask, p.z_mask])

    def items(self):
        n = 1 << self.length
        for x in range(n):
            for z in range(n):
                yield PauliString.from_masks(x, z, self.length), float(self.coefficients[x, z])

    def top(self, count: int = 10):
        """Largest ``|c_P|`` first; ties ordered by string code."""
        flat = self.coefficients.ravel()
        n = 1 << self.length
        codes = [PauliString.from_masks(i // n, i % n, self.length).code for i in range(flat.size)]
        order = np.lexsort((codes, -np.round(np.abs(flat), 12)))[:count]
        return [(PauliString.from_masks(i // n, i % n, self.length), float(flat[i])) for i in order]


def pauli_coefficients(rho: ReducedDensityMatrix, cap: int = ENUMERATION_CAP, check: float = 1e-8) -> PauliSpectrum:
    ell = rho.length
    if ell > cap:
        raise EnumerationTooLarge(f"region of {ell} sites exceeds enumeration cap {cap}")
    n = 1 << ell
    b = np.arange(n)
    offdiag = rho.matrix[b[None, :], b[None, :] ^ b[:, None]]
    coeffs = _prefactors(ell) * fwht(offdiag)
    if np.abs(coeffs.imag).max() > check:
        raise FloatingPointError("Pauli coefficients have a non-negligible imaginary part")
    return PauliSpectrum(ell, coeffs.real.copy())


def sre2(spectrum: PauliSpectrum) -> float:
    c2 = spectrum.coefficients**2
    return float(-np.log2((c2**2).sum() / c2.sum()))


def _pure_moments(psi: np.ndarray, chunk_elems: int = 1 << 22):
    """``(sum c_P^2, sum c_P^4)`` over all strings on the full chain."""
    n = psi.size
    b = np.arange(n)
    rows = max(1, chunk_elems // n)
    s2 = s4 = 0.0
    for start in range(0, n, rows):
        x = np.arange(start, min(n, start + rows))
        block = psi[None, :] * psi[b[None, :] ^ x[:, None]].conj()
        c2 = np.abs(fwht(block)) ** 2
        s2 += c2.sum()
        s4 += (c2**2).sum()
    return s2, s4


def sre2_pure(psi: np.ndarray, cap: int = PURE_ENUMERATION_CAP) -> float:
    """M2 of a pure state on its full chain, straight from ``<psi|P|psi>``."""
    psi = np.asarray(psi, dtype=complex)
    L = num_qubits(psi)
    if L > cap:
        raise EnumerationTooLarge(f"chain of {L} sites exceeds enumeration cap {cap}")
    psi = psi / np.linalg.norm(psi)
    s2, s4 = _pure_moments(psi)
    return float(-np.log2(s4 / s2))


def sre2_pure_many(states: np.ndarray) -> np.ndarray:
    """M2 for a batch of small pure states, one per row."""
    states = np.asarray(states, dtype=complex)
    states = states / np.linalg.norm(states, axis=1, keepdims=True)
    n = states.shape[1]
    b = np.arange(n)
    block = states[:, None, :] * states[:, b[None, :] ^ b[:, None]].conj()
    c2 = np.abs(fwht(block)) ** 2
    return -np.log2((c2**2).sum(axis=(1, 2)) / c2.sum(axis=(1, 2)))


def pure_spectrum(psi: np.ndarray, cap: int = ENUMERATION_CAP) -> PauliSpectrum:
    """Full-chain Pauli spectrum of a pure state."""
    return pauli_coefficients(reduced_density_matrix(psi), cap=cap)


def exact_magic(psi: np.ndarray, region=None, cap: int = ENUMERATION_CAP, pure_cap: int = PURE_ENUMERATION_CAP):
    """M2 and purity of ``region``; the full chain takes the pure-state route."""
    psi = np.asarray(psi, dtype=complex)
    L = num_qubits(psi)
    region = as_region(region, L)
    if len(region) == L:
        return sre2_pure(psi, cap=pure_cap), 1.0
    rho = reduced_density_matrix(psi, region)
    return sre2(pauli_coefficients(rho, cap=cap)), purity(rho)
