import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nh_magic.kspace import (
    KGrid, SectorState, _sector_arrays, band_energies_match, exceptional_line_limit,
    exceptional_line_quadrature, hk_matrix, momentum_resolved_magic, saturation_integrand,
    sector_ground_state, sector_magic, stabilizer_momenta, total_magic_density,
)
from nh_magic.model import XXParams

finite = dict(allow_nan=False, allow_infinity=False)


def xx(g, delta, J=1.0):
    return XXParams(2, g, delta, J)


def closed_form_magic(alpha, beta):
    """Two-qubit M2 of alpha|01> + beta|10> from its six nontrivial coefficients."""
    d = abs(alpha) ** 2 - abs(beta) ** 2
    cross = np.conj(alpha) * beta
    x, y = 2 * cross.real, 2 * cross.imag
    return -math.log2((1 + d**4 + x**4 + y**4) / 2)


def state(alpha, beta, k=0.0):
    return SectorState(k, complex(alpha), complex(beta), 0j, False)


def test_grid():
    grid = KGrid(8)
    assert grid.points[0] == 0 and grid.points[-1] < math.pi
    assert np.all(np.diff(grid.points) > 0)
    assert grid.points[4] == pytest.approx(math.pi / 2)
    with pytest.raises(ValueError):
        KGrid(1)


def test_hk_at_band_touching_is_jordan_block():
    np.testing.assert_allclose(hk_matrix(math.pi / 2, xx(0.7, 0.7)), [[0, 2.8], [0, 0]], atol=1e-15)


def test_hk_decoupled_limit():
    k = 0.4
    H = hk_matrix(k, xx(0.0, 0.0))
    np.testing.assert_allclose(H, np.diag([2 * math.cos(k), -2 * math.cos(k)]), atol=1e-15)


@settings(max_examples=80)
@given(st.floats(0, math.pi, exclude_max=True), st.floats(-3, 3, **finite), st.floats(-3, 3, **finite), st.floats(0.2, 3, **finite))
def test_sector_eigenvalues_match_bands(k, g, delta, J):
    p = xx(g, delta, J)
    # near a double root the eigenvalues move like sqrt(perturbation)
    if abs(J * J * math.cos(k) ** 2 + g * g - (delta * math.sin(k)) ** 2) < 1e-6:
        return
    assert band_energies_match(k, p) < 1e-12 * max(1.0, abs(g) + abs(delta) + J) * 10


def test_band_touching_sector_is_defective_z_state():
    s = sector_ground_state(math.pi / 2, xx(0.8, 0.8))
    assert s.defective
    assert (s.alpha, s.beta) == (pytest.approx(1), pytest.approx(0))
    assert s.energy == pytest.approx(0)
    assert sector_magic(s) == pytest.approx(0, abs=1e-12)


def test_decoupled_ground_sector_is_basis_state():
    for k in (0.1, 0.7, 1.3):
        s = sector_ground_state(k, xx(0.0, 0.0))
        assert abs(s.beta) == pytest.approx(1)
        assert s.energy == pytest.approx(-2 * math.cos(k))
        assert not s.defective


@pytest.mark.parametrize("k", [0.2, 0.9, 1.4, 2.0, 2.9])
def test_exceptional_line_states_are_real(k):
    s = sector_ground_state(k, xx(1.3, 1.3))
    assert abs(s.alpha.imag) < 1e-12 and abs(s.beta.imag) < 1e-12
    assert abs(s.alpha) ** 2 + abs(s.beta) ** 2 == pytest.approx(1, abs=1e-12)


@settings(max_examples=80)
@given(st.floats(0, math.pi, exclude_max=True), st.floats(-3, 3, **finite), st.floats(-3, 3, **finite))
def test_sector_state_is_a_normalized_right_eigenvector(k, g, delta):
    p = xx(g, delta)
    s = sector_ground_state(k, p)
    v = s.vector
    assert np.linalg.norm(v) == pytest.approx(1, abs=1e-12)
    assert np.linalg.norm(hk_matrix(k, p) @ v - s.energy * v) < 1e-9 * (1 + abs(g) + abs(delta))
    other = -s.energy if not s.defective else s.energy
    assert s.energy.real <= other.real + 1e-12


def test_pure_imaginary_pair_prefers_positive_branch():
    s = sector_ground_state(math.pi / 2, xx(0.2, 0.5))
    assert s.tie
    assert s.energy == pytest.approx(2j * math.sqrt(0.25 - 0.04))


def test_sector_magic_examples():
    assert sector_magic(state(1, 0)) == pytest.approx(0, abs=1e-12)
    r = 1 / math.sqrt(2)
    assert sector_magic(state(r, r)) == pytest.approx(0, abs=1e-12)
    c, s = math.cos(math.pi / 8), math.sin(math.pi / 8)
    assert sector_magic(state(c, s)) == pytest.approx(-math.log2(3 / 4), abs=1e-12)
    assert sector_magic(state(c, s)) == pytest.approx(0.415, abs=5e-4)


@settings(max_examples=100)
@given(st.floats(-3, 3, **finite), st.floats(-3, 3, **finite), st.floats(-3, 3, **finite), st.floats(-3, 3, **finite))
def test_sector_magic_matches_closed_form(ar, ai, br, bi):
    alpha, beta = complex(ar, ai), complex(br, bi)
    norm = math.hypot(abs(alpha), abs(beta))
    if norm < 1e-3:
        return
    alpha, beta = alpha / norm, beta / norm
    assert sector_magic(state(alpha, beta)) == pytest.approx(closed_form_magic(alpha, beta), abs=1e-12)


@settings(max_examples=100)
@given(st.floats(0, 2 * math.pi), st.floats(0, math.pi / 2), st.floats(0, 2 * math.pi))
def test_sector_magic_phase_and_conjugation_invariance(phase, theta, rel):
    alpha = math.cos(theta)
    beta = math.sin(theta) * complex(math.cos(rel), math.sin(rel))
    base = sector_magic(state(alpha, beta))
    u = complex(math.cos(phase), math.sin(phase))
    assert sector_magic(state(u * alpha, u * beta)) == pytest.approx(base, abs=1e-12)
    assert sector_magic(state(np.conj(alpha), np.conj(beta))) == pytest.approx(base, abs=1e-12)


def test_density_vanishes_when_decoupled():
    ks, magic = momentum_resolved_magic(xx(0.0, 0.0), KGrid(64))
    assert np.abs(magic).max() < 1e-12
    assert total_magic_density(xx(0.0, 0.0), KGrid(64)) == pytest.approx(0, abs=1e-12)


def test_density_saturates_on_exceptional_line():
    assert total_magic_density(xx(50.0, 50.0), KGrid(800)) == pytest.approx(math.log2(112 - 64 * math.sqrt(3)), abs=1e-3)


def test_density_has_a_local_minimum_at_the_exceptional_point():
    gs = np.round(np.arange(0.3, 0.71, 0.05), 2)
    density = [total_magic_density(xx(g, 0.5), KGrid(800)) for g in gs]
    i = list(gs).index(0.5)
    assert density[i] < density[i - 1] and density[i] < density[i + 1]


def test_saturation_constant():
    assert exceptional_line_limit() == pytest.approx(0.20006274, abs=1e-8)
    assert saturation_integrand(math.pi / 2) == pytest.approx(0, abs=1e-16)
    assert exceptional_line_quadrature() == pytest.approx(exceptional_line_limit(), abs=1e-9)


def test_saturation_constant_by_trapezoid():
    k = np.linspace(0, math.pi, 1_000_001)
    assert np.trapezoid(saturation_integrand(k), k) == pytest.approx(exceptional_line_limit(), abs=1e-9)


def test_large_coupling_sector_magic_approaches_integrand():
    ks = KGrid(40).points
    _, magic = momentum_resolved_magic(xx(1e4, 1e4), KGrid(40))
    np.testing.assert_allclose(magic, np.pi * saturation_integrand(ks), atol=1e-3)


@pytest.mark.parametrize("g", [0.3, 1.0, 2.5])
def test_exceptional_line_zeros(g):
    grid = KGrid(400)
    ks, magic = momentum_resolved_magic(xx(g, g), grid)
    assert magic[200] == pytest.approx(0, abs=1e-12)  # k = pi / 2
    roots = stabilizer_momenta(xx(g, g))
    assert len(roots) == 1 and 0 < roots[0] < math.pi / 2
    assert sector_magic(sector_ground_state(roots[0], xx(g, g))) == pytest.approx(0, abs=1e-9)


def test_defective_only_at_band_touching():
    ks = KGrid(400).points
    *_, defective, _ = _sector_arrays(ks, xx(0.9, 0.9))
    assert list(np.nonzero(defective)[0]) == [200]
    *_, defective, _ = _sector_arrays(ks, xx(1.2, 0.5))
    assert not defective.any()


@pytest.mark.parametrize("g,delta", [(1.0, 0.3), (1.5, 0.5), (0.8, 0.0), (2.0, 1.2)])
def test_density_converges_under_grid_doubling(g, delta):
    p = xx(g, delta)
    assert abs(total_magic_density(p, KGrid(800)) - total_magic_density(p, KGrid(400))) < 1e-3
