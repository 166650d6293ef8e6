"""Right ground states and spectrum classification for non-Hermitian operators.

The ground state is the right eigenvector whose eigenvalue has the smallest
real part. Eigenvalues whose real parts agree within ``tie_tol`` count as a
tie, and the one with the largest imaginary part wins. For a complex-conjugate
pair that selects the ``Im E > 0`` member.
"""

from __future__ import annotations

import dataclasses
import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla
from scipy.sparse.csgraph import connected_components

from .model import build_hamiltonian

log = logging.getLogger(__name__)


class ConvergenceError(RuntimeError):
    """The iterative solver did not reach the residual target."""

    def __init__(self, message: str, best_residual: float):
        super().__init__(f"{message} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


class DimensionError(ValueError):
    """The operator is too large for the requested method."""


@dataclass(frozen=True)
class SolverOptions:
    dense_threshold: int = 4096
    krylov_dim: int | None = None
    max_iter: int = 10000
    tol: float = 1e-12
    nev: int = 6
    tie_tol: float = 1e-9
    max_dense_dim: int = 16384


@dataclass
class GroundState:
    energy: complex
    vector: np.ndarray
    residual: float
    tie_flag: bool
    method: str

    @property
    def L(self) -> int:
        return self.vector.size.bit_length() - 1


@dataclass
class SpectrumReport:
    eigenvalues: np.ndarray
    complex_fraction: float
    max_imag: float
    conjugation_closed: bool


def operator_scale(H) -> float:
    """Largest absolute matrix entry, used to make tolerances relative."""
    H = sp.csr_matrix(H)
    return float(np.abs(H.data).max()) if H.nnz else 1.0


def residual_norm(H, vector: np.ndarray, energy: complex) -> float:
    return float(np.linalg.norm(H @ vector - energy * vector))


def residual_bound(H) -> float:
    """Largest residual a returned ground state is allowed to have."""
    return 1e-8 * operator_scale(H) * H.shape[0]


def _blocks(H: sp.csr_matrix):
    """Index sets of the connected components of the sparsity graph."""
    pattern = abs(H) + abs(H.T)
    n_comp, labels = connected_components(pattern, directed=False)
    order = np.argsort(labels, kind="stable")
    bounds = np.searchsorted(labels[order], np.arange(n_comp + 1))
    return [order[bounds[i]:bounds[i + 1]] for i in range(n_comp)]


def _dense_eig(block: np.ndarray, vectors: bool = True):
    if np.allclose(block, block.conj().T, rtol=0, atol=1e-14 * max(1.0, np.abs(block).max())):
        w, v = np.linalg.eigh(block)
        return w.astype(complex), v
    if not np.iscomplexobj(block) or not np.any(block.imag):
        block = block.real
    if vectors:
        return np.linalg.eig(block)
    return np.linalg.eigvals(block), None


def _select(eigenvalues: np.ndarray, tie_tol: float, scale: float) -> tuple[int, bool]:
    re_min = eigenvalues.real.min()
    ties = np.nonzero(eigenvalues.real <= re_min + tie_tol * scale)[0]
    best = ties[np.argmax(eigenvalues.imag[ties])]
    return int(best), ties.size > 1


def _fix_phase(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    pivot = v[np.argmax(np.abs(v) > np.abs(v).max() * (1 - 1e-9))]
    return v * (abs(pivot) / pivot)


def _dense_ground_state(H: sp.csr_matrix, opts: SolverOptions) -> GroundState:
    scale = operator_scale(H)
    blocks = _blocks(H)
    if len(blocks) == 1:
        idx = blocks[0]
        w, v = _dense_eig(H.toarray())
        j, tie = _select(w, opts.tie_tol, scale)
    else:
        values, owners = [], []
        for i, block in enumerate(blocks):
            vals, _ = _dense_eig(H[block][:, block].toarray(), vectors=False)
            values.append(vals)
            owners.append(np.full(vals.size, i))
        values = np.concatenate(values)
        owners = np.concatenate(owners)
        choice, tie = _select(values, opts.tie_tol, scale)
        idx = blocks[owners[choice]]
        w, v = _dense_eig(H[idx][:, idx].toarray())
        j = int(np.argmin(np.abs(w - values[choice])))
    vector = np.zeros(H.shape[0], dtype=complex)
    vector[idx] = v[:, j]
    vector = _fix_phase(vector)
    return GroundState(complex(w[j]), vector, residual_norm(H, vector, w[j]), tie, "dense")


def _krylov_ground_state(H: sp.csr_matrix, opts: SolverOptions) -> GroundState:
    dim = H.shape[0]
    scale = operator_scale(H)
    nev = min(opts.nev, dim - 2)
    ncv = opts.krylov_dim or min(dim - 1, max(2 * nev + 1, 40))
    # fixed start vector keeps the result reproducible
    v0 = np.random.default_rng(12345).standard_normal(dim).astype(complex)
    best = np.inf
    try:
        w, v = spla.eigs(H, k=nev, which="SR", ncv=ncv, maxiter=opts.max_iter, tol=opts.tol, v0=v0)
    except spla.ArpackNoConvergence as err:
        w, v = err.eigenvalues, err.eigenvectors
    if w.size:
        choice, tie = _select(w, opts.tie_tol, scale)
        vector = _fix_phase(v[:, choice])
        res = residual_norm(H, vector, w[choice])
        best = res
        if res <= residual_bound(H):
            return GroundState(complex(w[choice]), vector, res, tie, "krylov")
    if dim <= opts.max_dense_dim:
        log.warning("Krylov solver stalled (residual %.3e); falling back to dense", best)
        return _dense_ground_state(H, opts)
    raise ConvergenceError("Krylov ground-state search failed", best)


def ground_state(H, opts: SolverOptions | None = None) -> GroundState:
    """Right eigenpair of ``H`` with minimal real energy."""
    opts = opts or SolverOptions()
    H = sp.csr_matrix(H, dtype=complex)
    dim = H.shape[0]
    if H.shape != (dim, dim) or dim < 2:
        raise ValueError(f"need a square operator of dimension >= 2, got {H.shape}")
    if dim <= opts.dense_threshold:
        return _dense_ground_state(H, opts)
    return _krylov_ground_state(H, opts)


def conjugation_closed(eigenvalues: np.ndarray, tol: float) -> bool:
    """True if the multiset is mapped to itself by complex conjugation."""
    remaining = list(np.asarray(eigenvalues))
    remaining.sort(key=lambda z: (z.real, z.imag))
    pool = np.array(remaining)
    used = np.zeros(pool.size, dtype=bool)
    for z in pool:
        dist = np.abs(pool - np.conj(z))
        dist[used] = np.inf
        j = int(np.argmin(dist))
        if dist[j] > tol:
            return False
        used[j] = True
    return True


def full_spectrum(H, opts: SolverOptions | None = None, imag_tol: float = 1e-8) -> SpectrumReport:
    """All eigenvalues by dense diagonalization of each symmetry block.

    ``imag_tol`` is relative to the largest matrix entry.
    """
    opts = opts or SolverOptions()
    H = sp.csr_matrix(H, dtype=complex)
    if H.shape[0] > opts.dense_threshold:
        raise DimensionError(f"dimension {H.shape[0]} exceeds dense threshold {opts.dense_threshold}")
    scale = operator_scale(H)
    values = np.concatenate([_dense_eig(H[idx][:, idx].toarray(), vectors=False)[0] for idx in _blocks(H)])
    imag = np.abs(values.imag)
    return SpectrumReport(
        eigenvalues=np.sort_complex(values),
        complex_fraction=float(np.mean(imag > imag_tol * scale)),
        max_imag=float(imag.max()),
        conjugation_closed=conjugation_closed(values, imag_tol * scale * 10),
    )


def pt_transition_scan(base, name: str, values, opts: SolverOptions | None = None, imag_tol: float = 1e-8):
    """Complex fraction of the spectrum along one parameter of ``base``.

    ``base`` is an :class:`IsingParams` or :class:`XXParams`; ``name`` is the
    field to vary. Returns a list of ``(value, complex_fraction)``.
    """
    values = list(values)
    if values != sorted(values):
        raise ValueError("scan grid must be sorted ascending")
    table = []
    for value in values:
        H = build_hamiltonian(dataclasses.replace(base, **{name: value}))
        table.append((value, full_spectrum(H, opts, imag_tol).complex_fraction))
    return table


def pt_threshold(table) -> float | None:
    """First scanned value with a complex spectrum, or ``None``."""
    for value, fraction in table:
        if fraction > 0:
            return value
    return None
