import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import REF, draw_cycle
from spinotto.coupled import reduced_distributions
from spinotto.errors import DimensionError, ParameterError
from spinotto.spectra import SpinMagnitude, coupled_spectrum, hamiltonian_matrix, single_spin_spectrum, zeeman_matrix
from spinotto.thermo import canonical_distribution, otto_cycle
from spinotto.verify import (
    brute_force_cycle,
    diagonalize,
    partial_trace,
    reduced_matrix,
    thermal_density_matrix,
)


def test_diagonalize_rejects_bad_input():
    with pytest.raises(DimensionError):
        diagonalize(np.zeros((2, 3)))
    with pytest.raises(ParameterError):
        diagonalize(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_diagonalize_identity_block():
    w, V = diagonalize(np.diag([3.0, 1.0, 2.0]))
    assert list(w) == [1.0, 2.0, 3.0]
    assert np.allclose(np.abs(V), np.eye(3)[:, [1, 2, 0]])


def test_thermal_matrix_is_a_state():
    rho = thermal_density_matrix(hamiltonian_matrix("3/2", 2.0, 0.1), 1.5)
    assert np.trace(rho.matrix) == pytest.approx(1.0, abs=1e-14)
    assert np.linalg.eigvalsh(rho.matrix).min() > -1e-15
    with pytest.raises(ParameterError):
        thermal_density_matrix(np.eye(2), 0.0)


def test_product_basis_convention():
    # at J = 0 and low T only |up, m=s> ... ground is half down, spin m = -s
    spin = SpinMagnitude(2)
    rho = thermal_density_matrix(hamiltonian_matrix(spin, 1.0, 0.0), 0.01)
    assert np.allclose(partial_trace(rho, "half", spin), [1.0, 0.0])
    assert np.allclose(partial_trace(rho, "spin", spin), [1.0, 0.0, 0.0])
    with pytest.raises(ParameterError):
        reduced_matrix(rho, "both", spin)
    with pytest.raises(DimensionError):
        reduced_matrix(np.eye(4), "half", spin)


def test_reduced_states_are_diagonal():
    spin = SpinMagnitude(3)
    rho = thermal_density_matrix(hamiltonian_matrix(spin, 2.0, 0.2), 1.0)
    for keep in ("half", "spin"):
        red = reduced_matrix(rho, keep, spin)
        assert np.abs(red - np.diag(np.diag(red))).max() < 1e-14


@pytest.mark.parametrize("twice_s", range(1, 6))
def test_marginals_match_partial_trace(twice_s):
    spin = SpinMagnitude(twice_s)
    rng = np.random.default_rng(twice_s)
    for _ in range(25):
        B1, _, T1, _, J = draw_cycle(rng, twice_s)
        P = canonical_distribution(coupled_spectrum(spin, B1, J), T1)
        rho = thermal_density_matrix(hamiltonian_matrix(spin, B1, J), T1)
        q, r = reduced_distributions(P, spin)
        assert np.abs(q - partial_trace(rho, "half", spin)).max() <= 1e-10
        assert np.abs(r - partial_trace(rho, "spin", spin)).max() <= 1e-10


def test_brute_force_matches_label_sums_spin_one():
    a = brute_force_cycle(1, True, J=0.1, **REF)
    b = otto_cycle(coupled_spectrum(1, 5.0, 0.1), coupled_spectrum(1, 3.0, 0.1), 6.0, 3.0)
    for name in ("Q1", "Q2", "W", "S1", "S2", "D_pp", "D_ppr", "dS_tot"):
        assert getattr(a, name) == pytest.approx(getattr(b, name), rel=1e-10, abs=1e-14), name
    assert a.mode == b.mode == "engine"


def test_brute_force_single_spin():
    a = brute_force_cycle("3/2", False, **REF)
    b = otto_cycle(single_spin_spectrum("3/2", 5.0), single_spin_spectrum("3/2", 3.0), 6.0, 3.0)
    assert a.W == pytest.approx(b.W, rel=1e-10)


def test_zeeman_matrix_diagonal():
    assert np.allclose(zeeman_matrix(1, 2.0).matrix, np.diag([4.0, 0.0, -4.0]))


@settings(max_examples=60, deadline=None)
@given(twice_s=st.integers(1, 5), seed=st.integers(0, 2**32 - 1), coupled=st.booleans())
def test_brute_force_property(twice_s, seed, coupled):
    rng = np.random.default_rng(seed)
    B1, B2, T1, T2, J = draw_cycle(rng, twice_s, coupled)
    spin = SpinMagnitude(twice_s)
    a = brute_force_cycle(spin, coupled, B1, B2, T1, T2, J)
    medium = (coupled_spectrum if coupled else lambda s, B, J: single_spin_spectrum(s, B))
    b = otto_cycle(medium(spin, B1, J), medium(spin, B2, J), T1, T2)
    scale = max(abs(b.Q1), abs(b.Q2))
    assert abs(a.Q1 - b.Q1) <= 1e-10 * scale + 1e-13
    assert abs(a.Q2 - b.Q2) <= 1e-10 * scale + 1e-13
