import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spinotto.errors import ParameterError
from spinotto.spectra import (
    SpinMagnitude,
    coupled_spectrum,
    hamiltonian_matrix,
    ordering_threshold,
    single_spin_spectrum,
)
from spinotto.verify import diagonalize


def test_spin_magnitude_parsing():
    assert SpinMagnitude.from_value("3/2").twice_s == 3
    assert SpinMagnitude.from_value(1).twice_s == 2
    assert SpinMagnitude.from_value(0.5).twice_s == 1
    assert str(SpinMagnitude(5)) == "5/2"
    assert SpinMagnitude(4).coupled_levels == 10
    with pytest.raises(ParameterError):
        SpinMagnitude(0)
    with pytest.raises(ParameterError):
        SpinMagnitude.from_value(0.3)


@pytest.mark.parametrize("s, B, expected", [
    ("1/2", 1.0, (-1.0, 1.0)),
    (1, 5.0, (-10.0, 0.0, 10.0)),
    ("3/2", 2.0, (-6.0, -2.0, 2.0, 6.0)),
])
def test_single_spin_levels(s, B, expected):
    spec = single_spin_spectrum(s, B)
    assert spec.energies == expected
    assert list(spec.labels) == list(range(1, len(expected) + 1))
    assert spec.shift == 0.0


def test_single_spin_rejects_nonpositive_field():
    with pytest.raises(ParameterError):
        single_spin_spectrum(1, 0.0)


def test_coupled_s1_levels():
    spec = coupled_spectrum(1, 5.0, 0.1)
    assert np.allclose(spec.energies, (-15, -6.2, -5, 3.8, 5, 15), atol=1e-14)
    assert spec.ordered
    assert spec.shift == pytest.approx(-0.4)


def test_coupled_rejects_bad_inputs():
    with pytest.raises(ParameterError):
        coupled_spectrum(1, -1.0, 0.1)
    with pytest.raises(ParameterError):
        coupled_spectrum(1, 1.0, -0.1)


@pytest.mark.parametrize("twice_s", range(1, 6))
def test_zero_coupling_is_sum_of_zeeman_levels(twice_s):
    spin = SpinMagnitude(twice_s)
    B = 1.7
    spec = coupled_spectrum(spin, B, 0.0)
    zeeman = sorted(2 * B * (m1 + m2) for m1 in (0.5, -0.5) for m2 in spin.magnetic_numbers())
    assert np.allclose(sorted(spec.energies), zeeman, atol=1e-13)


def test_single_spin_levels_odd_in_field():
    for twice_s in range(1, 6):
        up = np.array(single_spin_spectrum(SpinMagnitude(twice_s), 2.3).energies)
        assert np.allclose(up, -up[::-1])
        assert np.allclose(np.diff(up), 2 * 2.3)


def test_hamiltonian_zeeman_only_spin_half():
    H = hamiltonian_matrix("1/2", 1.0, 0.0).matrix
    assert np.allclose(H, np.diag([2.0, 0.0, 0.0, -2.0]))


def test_hamiltonian_singlet_triplet():
    w, _ = diagonalize(hamiltonian_matrix("1/2", 0.0, 1.0))
    assert np.allclose(w, [-6.0, 2.0, 2.0, 2.0], atol=1e-12)


def test_hamiltonian_is_symmetric_and_sized():
    for twice_s in range(1, 6):
        H = hamiltonian_matrix(SpinMagnitude(twice_s), 3.1, 0.2)
        assert H.dim == 2 * (twice_s + 2) - 2
        assert np.abs(H.matrix - H.matrix.T).max() <= 1e-14 * np.abs(H.matrix).max()


@pytest.mark.parametrize("s, B, J", [(1, 5.0, 0.1), ("3/2", 5.0, 0.1), ("5/2", 2.0, 0.05)])
def test_analytic_levels_equal_shifted_eigenvalues(s, B, J):
    spec = coupled_spectrum(s, B, J)
    w, _ = diagonalize(hamiltonian_matrix(s, B, J))
    assert np.allclose(np.sort(w + spec.shift), sorted(spec.energies), atol=1e-10, rtol=0)


def test_random_oracle_agreement(rng):
    for twice_s in range(1, 6):
        spin = SpinMagnitude(twice_s)
        for _ in range(100):
            J = rng.uniform(0, 1)
            B = ordering_threshold(spin, J) * rng.uniform(1.001, 5) + 1e-3
            spec = coupled_spectrum(spin, B, J)
            w, _ = diagonalize(hamiltonian_matrix(spin, B, J))
            assert np.abs(np.sort(w + spec.shift) - np.array(spec.energies)).max() <= 1e-10


def test_ordering_threshold_values():
    assert ordering_threshold(1, 1.0) == 6.0
    assert ordering_threshold("1/2", 1.0) == 4.0
    assert ordering_threshold("5/2", 0.0) == 0.0


@pytest.mark.parametrize("twice_s", range(1, 6))
def test_ordering_threshold_is_first_crossing(twice_s):
    # brute force: scan B just above and below the threshold, check adjacent-level order numerically
    spin = SpinMagnitude(twice_s)
    J = 0.375
    thr = ordering_threshold(spin, J)
    above = np.diff(coupled_spectrum(spin, thr * (1 + 1e-9), J).energies)
    below = np.diff(coupled_spectrum(spin, thr * (1 - 1e-6), J).energies)
    assert np.all(above > 0)
    assert np.any(below < 0)
    assert not coupled_spectrum(spin, thr, J).ordered


@settings(max_examples=200, deadline=None)
@given(twice_s=st.integers(1, 5), J=st.floats(1e-3, 2), factor=st.floats(1.0001, 50))
def test_strictly_increasing_above_threshold(twice_s, J, factor):
    spin = SpinMagnitude(twice_s)
    B = max(ordering_threshold(spin, J) * factor, 1e-3)
    spec = coupled_spectrum(spin, B, J)
    assert spec.ordered
    assert all(b > a for a, b in itertools.pairwise(spec.energies))
