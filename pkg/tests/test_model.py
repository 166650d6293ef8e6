import math

import numpy as np
import pytest

from nh_magic.model import (
    IsingParams, XXParams, build_nhti, build_xx_spin, effective_hermitian_field,
    ising_critical_gamma, xx_band_energies,
)
from nh_magic.eigen import conjugation_closed

from conftest import dense_nhti, dense_xx


def ising_obc_ground_energy(L, J, h):
    """Free-fermion ground energy of -J sum XX + h sum Z with open ends.

    The quasiparticle energies are twice the singular values of the L x L
    bidiagonal matrix with h on the diagonal and J above it.
    """
    M = np.diag(np.full(L, float(h))) + np.diag(np.full(L - 1, float(J)), 1)
    return -np.linalg.svd(M, compute_uv=False).sum()


def xx_single_particle(L, J, g, delta):
    M = np.zeros((L, L), dtype=complex)
    for s in range(L):
        M[s, s] = 2 * g * (-1) ** (s + 1)
    for s in range(L - 1):
        M[s, s + 1] = M[s + 1, s] = J + 1j * (-1) ** (s + 1) * delta
    return M


def xx_filled_energy(L, J, g, delta):
    """Fill every single-particle mode with negative real part."""
    eps = np.linalg.eigvals(xx_single_particle(L, J, g, delta))
    offset = -g * sum((-1) ** j for j in range(1, L + 1))
    return eps[eps.real < 0].sum() + offset


def min_re(values):
    return values[np.argmin(values.real)]


@pytest.mark.parametrize("L,J,h,gamma", [(2, 1.0, 0.7, 0.3), (3, 1.3, -0.4, 1.2), (5, 0.8, 1.1, 0.0), (6, 1.0, 1.5, 0.9)])
def test_nhti_matches_kron_reference(L, J, h, gamma):
    np.testing.assert_allclose(build_nhti(IsingParams(L, h, gamma, J)).toarray(), dense_nhti(L, J, h, gamma), atol=1e-14)


@pytest.mark.parametrize("L,J,g,delta", [(2, 1.0, 0.0, 0.0), (3, 1.0, 0.4, 0.9), (4, 0.7, 1.2, 0.5), (6, 1.0, -0.3, 0.8)])
def test_xx_matches_kron_reference(L, J, g, delta):
    np.testing.assert_allclose(build_xx_spin(XXParams(L, g, delta, J)).toarray(), dense_xx(L, J, g, delta), atol=1e-14)


def test_nhti_hermitian_at_zero_gamma():
    H = build_nhti(IsingParams(6, 0.8, 0.0)).toarray()
    assert np.abs(H - H.conj().T).max() < 1e-14


def test_nhti_transpose_flips_gamma():
    # i gamma Y is a real antisymmetric matrix, so H^T is the chain at -gamma
    H = build_nhti(IsingParams(5, 1.1, 0.7)).toarray()
    np.testing.assert_array_equal(H.T, build_nhti(IsingParams(5, 1.1, -0.7)).toarray())
    assert np.abs(H - H.conj().T).max() > 0.1


def test_nhti_two_site_pure_coupling():
    w = np.linalg.eigvalsh(build_nhti(IsingParams(2, 0.0)).toarray())
    np.testing.assert_allclose(w, [-1, -1, 1, 1], atol=1e-14)


def test_nhti_hermitian_ground_energy_matches_free_fermions():
    H = build_nhti(IsingParams(8, 1.0)).toarray()
    assert np.linalg.eigvalsh(H)[0] == pytest.approx(ising_obc_ground_energy(8, 1.0, 1.0), abs=1e-10)


SIMILARITY_CASES = [
    (L, h, gamma)
    for L in (4, 6, 8, 10)
    for h, gamma in ((1.2, 0.25), (0.6, 0.8), (2.0, 0.9), (-1.0, -0.5), (2.0, 0.95))
    # the eigenvalue condition number grows like ((1 + gamma) / (1 - gamma))^(L/2)
    if not (gamma == 0.95 and L > 8)
]


@pytest.mark.parametrize("L,h,gamma", SIMILARITY_CASES)
def test_similarity_preserves_ground_energy(L, h, gamma):
    w = np.linalg.eigvals(build_nhti(IsingParams(L, h, gamma)).toarray())
    herm = ising_obc_ground_energy(L, 1.0, effective_hermitian_field(h, gamma))
    e0 = min_re(w)
    assert abs(e0.imag) < 1e-8
    assert e0.real == pytest.approx(herm, abs=1e-8)


def test_xx_hermitian_limit_symmetric_spectrum():
    w = np.linalg.eigvalsh(build_xx_spin(XXParams(6, 0.0, 0.0)).toarray())
    np.testing.assert_allclose(np.sort(w), np.sort(-w), atol=1e-12)


def test_xx_two_site_magnon():
    w = np.linalg.eigvalsh(build_xx_spin(XXParams(2, 0.0, 0.0)).toarray())
    np.testing.assert_allclose(w, [-1, 0, 0, 1], atol=1e-14)


def test_xx_conserves_magnetization(rng):
    L = 6
    H = build_xx_spin(XXParams(L, rng.normal(), rng.normal(), 1.0 + rng.random()))
    sz = np.diag([bin(b).count("1") * 2 - L for b in range(2**L)])
    comm = H @ sz - sz @ H
    assert np.abs(comm).max() < 1e-13


@pytest.mark.parametrize("L", [4, 5, 8, 9, 12])
@pytest.mark.parametrize("g,delta", [(1.2, 0.5), (0.5, 0.5), (0.2, 0.7)])
def test_xx_ground_energy_by_mode_filling(L, g, delta):
    from nh_magic.eigen import ground_state

    e_many = ground_state(build_xx_spin(XXParams(L, g, delta))).energy
    assert e_many.real == pytest.approx(xx_filled_energy(L, 1.0, g, delta).real, abs=1e-8)


@pytest.mark.parametrize("L", [2, 4, 6, 8])
def test_nhti_spectrum_closed_under_conjugation(L):
    for gamma in (0.5, 1.3):
        w = np.linalg.eigvals(build_nhti(IsingParams(L, 1.1, gamma)).toarray())
        assert conjugation_closed(w, 1e-8 * 10)


@pytest.mark.parametrize("L", [3, 5, 7])
def test_xx_odd_chain_spectrum_closed_under_conjugation(L):
    for g, delta in ((0.7, 0.4), (0.3, 0.8)):
        w = np.linalg.eigvals(build_xx_spin(XXParams(L, g, delta)).toarray())
        assert conjugation_closed(w, 1e-8 * 10)


@pytest.mark.parametrize("L", [4, 6, 8])
def test_xx_even_open_chain_is_not_pt_symmetric(L):
    # reflection maps (g, delta) -> (-g, -delta) when L is even, so the
    # open chain has no PT partner for its eigenvalues
    w = np.linalg.eigvals(build_xx_spin(XXParams(L, 0.7, 0.4)).toarray())
    assert not conjugation_closed(w, 1e-6)


def test_band_energies():
    p = XXParams(2, 0.8, 0.8)
    assert xx_band_energies(np.pi / 2, p) == (pytest.approx(0), pytest.approx(0))
    up, down = xx_band_energies(np.pi / 2, XXParams(2, 2.0, 1.0))
    assert up == pytest.approx(2 * math.sqrt(3)) and down == pytest.approx(-2 * math.sqrt(3))
    up, down = xx_band_energies(np.pi / 2, XXParams(2, 0.3, 0.5))
    assert up == pytest.approx(2j * 0.4) and down == pytest.approx(-2j * 0.4)


def test_critical_gamma():
    assert ising_critical_gamma(1.0) == 0.0
    assert ising_critical_gamma(2.0) == pytest.approx(math.sqrt(3) / 2)
    assert ising_critical_gamma(0.5) is None
    with pytest.raises(ValueError):
        ising_critical_gamma(0.0)


def test_effective_field():
    assert effective_hermitian_field(1.3, 0.0) == 1.3
    assert effective_hermitian_field(1.3, 1.0) == 0.0
    assert effective_hermitian_field(1.0, 0.6) == pytest.approx(0.8)
    with pytest.raises(ValueError):
        effective_hermitian_field(1.0, 1.01)


@pytest.mark.parametrize("bad", [dict(L=1, h=1.0), dict(L=4, h=1.0, J=0.0)])
def test_ising_params_validation(bad):
    with pytest.raises(ValueError):
        IsingParams(**bad)


def test_sparse_entry_count_is_linear():
    L = 10
    H = build_nhti(IsingParams(L, 1.0, 0.5))
    assert H.nnz <= (2 * L) * 2**L
