"""Stabilizer Renyi entropy ("magic") of non-Hermitian PT-symmetric spin chains."""

from .eigen import GroundState, SolverOptions, SpectrumReport, full_spectrum, ground_state, pt_transition_scan
from .kspace import KGrid, SectorState, exceptional_line_limit, hk_matrix, momentum_resolved_magic, sector_ground_state, sector_magic, total_magic_density
from .magic import PauliSpectrum, exact_magic, pauli_coefficients, sre2, sre2_pure
from .model import IsingParams, XXParams, build_nhti, build_xx_spin, effective_hermitian_field, ising_critical_gamma, xx_band_energies
from .pauli import PauliString, apply_pauli, pauli_expectation, pauli_parse, pauli_render
from .rdm import ReducedDensityMatrix, purity, reduced_density_matrix
from .sampler import MagicEstimate, SamplerConfig, estimate_m2, metropolis_step
from .sweep import Axis, ScanSpec, emit, finite_size_series, run_scan

__version__ = "0.1.0"
