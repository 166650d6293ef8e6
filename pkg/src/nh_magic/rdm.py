"""Right-right reduced density matrices of contiguous subregions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import num_qubits


@dataclass
class ReducedDensityMatrix:
    region: range
    matrix: np.ndarray

    @property
    def length(self) -> int:
        return len(self.region)


def as_region(region, L: int) -> range:
    """Normalize ``None``, a ``range`` or an inclusive ``(first, last)`` pair."""
    if region is None:
        return range(L)
    if not isinstance(region, range):
        first, last = region
        region = range(first, last + 1)
    if len(region) == 0 or region.step != 1:
        raise ValueError(f"region {region} must be a nonempty contiguous range")
    if region.start < 0 or region.stop > L:
        raise ValueError(f"region {region} lies outside the chain [0, {L})")
    return region


def reduced_density_matrix(psi: np.ndarray, region=None) -> ReducedDensityMatrix:
    """Trace out everything outside ``region`` from ``|psi><psi| / <psi|psi>``.

    The region's first site becomes the least significant qubit of the result.
    """
    psi = np.asarray(psi, dtype=complex)
    L = num_qubits(psi)
    region = as_region(region, L)
    ell = len(region)
    tensor = psi.reshape(1 << (L - region.stop), 1 << ell, 1 << region.start)
    rho = np.einsum("amb,anb->mn", tensor, tensor.conj())
    rho /= np.trace(rho).real
    return ReducedDensityMatrix(region, rho)


def purity(rho: ReducedDensityMatrix) -> float:
    m = rho.matrix
    # Tr(rho^2) for Hermitian rho without forming the product
    return float(np.vdot(m, m).real)
