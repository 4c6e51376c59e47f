import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from conftest import draw_cycle
from spinotto.errors import AbsoluteContinuityError, LengthMismatchError, MismatchedSpectraError, ParameterError
from spinotto.spectra import SpinMagnitude, coupled_spectrum, single_spin_spectrum, spectrum
from spinotto.thermo import (
    canonical_distribution,
    heats_via_divergence,
    logsumexp,
    operation_mode,
    otto_cycle,
    relative_entropy,
    shannon_entropy,
    work_via_divergence,
)

probs = st.lists(st.floats(1e-6, 1.0), min_size=2, max_size=12).map(lambda v: np.array(v) / sum(v))


def test_two_level_closed_form():
    # p_excited = 1/(1+e^{2B/T}); independent hand formula
    B, T = 5.0, 6.0
    P = canonical_distribution(single_spin_spectrum("1/2", B), T)
    pe = 1.0 / (1.0 + math.exp(2 * B / T))
    assert P.probs[1] == pytest.approx(pe, rel=1e-14)
    assert P.probs.sum() == pytest.approx(1.0, abs=1e-15)


def test_two_level_cycle_closed_form():
    B1, B2, T1, T2 = 5.0, 3.0, 6.0, 3.0
    c = otto_cycle(single_spin_spectrum("1/2", B1), single_spin_spectrum("1/2", B2), T1, T2)
    d = 1 / (1 + math.exp(2 * B1 / T1)) - 1 / (1 + math.exp(2 * B2 / T2))
    assert c.Q1 == pytest.approx(2 * B1 * d, rel=1e-13)
    assert c.Q2 == pytest.approx(-2 * B2 * d, rel=1e-13)
    assert c.W == pytest.approx(2 * (B1 - B2) * d, rel=1e-13)
    assert c.eta == pytest.approx(0.4, rel=1e-13)
    assert c.mode == "engine"


def test_frozen_spin_one_single_cycle():
    c = otto_cycle(single_spin_spectrum(1, 5.0), single_spin_spectrum(1, 3.0), 6.0, 3.0)
    assert c.W == pytest.approx(0.25377058225176663, rel=1e-10)
    assert c.carnot == 0.5


def test_low_temperature_no_overflow():
    P = canonical_distribution(coupled_spectrum("5/2", 50.0, 0.1), 1e-3)
    assert np.isfinite(P.log_probs).all()
    assert P.probs[0] == 1.0
    assert shannon_entropy(P) >= 0.0


def test_relative_entropy_underflow_is_finite():
    hot = canonical_distribution(single_spin_spectrum(1, 5.0), 0.004)
    cold = canonical_distribution(single_spin_spectrum(1, 5.0), 1.0)
    assert hot.probs[-1] == 0.0
    d = relative_entropy(cold, hot)
    # hot log-populations are 0, -2500, -5000 to double precision
    assert d == pytest.approx(cold.probs[0] * cold.log_probs[0] + cold.probs[1] * (cold.log_probs[1] + 2500) + cold.probs[2] * (cold.log_probs[2] + 5000), rel=1e-9)


def test_relative_entropy_errors():
    with pytest.raises(AbsoluteContinuityError):
        relative_entropy([0.5, 0.5], [1.0, 0.0])
    with pytest.raises(LengthMismatchError):
        relative_entropy([0.5, 0.5], [0.2, 0.3, 0.5])
    assert relative_entropy([1.0, 0.0], [0.5, 0.5]) == pytest.approx(math.log(2))


def test_invalid_temperatures():
    spec = single_spin_spectrum(1, 1.0)
    with pytest.raises(ParameterError):
        canonical_distribution(spec, 0.0)
    with pytest.raises(ParameterError):
        otto_cycle(spec, spec, 2.0, 3.0)


def test_mismatched_spectra():
    with pytest.raises(MismatchedSpectraError):
        otto_cycle(single_spin_spectrum(1, 5.0), single_spin_spectrum("3/2", 3.0), 6.0, 3.0)
    with pytest.raises(MismatchedSpectraError):
        otto_cycle(coupled_spectrum(1, 5.0, 0.1), coupled_spectrum(1, 3.0, 0.2), 6.0, 3.0)


def test_operation_modes():
    assert operation_mode(1.0, -0.5, 0.5) == "engine"
    assert operation_mode(-1.0, 0.5, -0.5) == "refrigerator"
    assert operation_mode(0.0, 0.0, 0.0) == "dud"
    c = otto_cycle(single_spin_spectrum("1/2", 5.0), single_spin_spectrum("1/2", 3.0), 6.0, 5.0)
    assert c.mode == "refrigerator" and c.eta is None


def test_logsumexp_matches_naive():
    x = np.array([0.1, -3.0, 2.5])
    assert logsumexp(x) == pytest.approx(math.log(np.exp(x).sum()), rel=1e-15)
    assert logsumexp([1000.0, 1000.0]) == pytest.approx(1000 + math.log(2))


@settings(max_examples=150, deadline=None)
@given(x=probs)
def test_entropy_bounds(x):
    assert -1e-12 <= shannon_entropy(x) <= math.log(len(x)) + 1e-12


@settings(max_examples=150, deadline=None)
@given(x=probs, y=probs)
def test_gibbs_inequality(x, y):
    if len(x) != len(y):
        return
    assert relative_entropy(x, y) >= -1e-12
    assert relative_entropy(x, x) == pytest.approx(0.0, abs=1e-14)


@settings(max_examples=200, deadline=None)
@given(
    twice_s=st.integers(1, 5),
    B1=st.floats(0.5, 10), rb=st.floats(0.05, 0.95),
    T1=st.floats(0.3, 20), rt=st.floats(0.05, 0.95),
    rj=st.floats(0, 0.99), coupled=st.booleans(),
)
def test_divergence_identities(twice_s, B1, rb, T1, rt, rj, coupled):
    spin = SpinMagnitude(twice_s)
    B2, T2 = B1 * rb, T1 * rt
    J = rj * B2 / (2 * spin.multiplicity) if coupled else 0.0
    medium = "coupled" if coupled else "single"
    c = otto_cycle(spectrum(medium, spin, B1, J), spectrum(medium, spin, B2, J), T1, T2)
    Q1, Q2 = heats_via_divergence(c.hot, c.cold)
    scale = max(abs(c.Q1), abs(c.Q2), 1e-300)
    assert abs(Q1 - c.Q1) <= 1e-10 * scale + 1e-13
    assert abs(Q2 - c.Q2) <= 1e-10 * scale + 1e-13
    assert abs(work_via_divergence(c.hot, c.cold) - c.W) <= 1e-10 * scale + 1e-13
    assert c.dS_tot == pytest.approx(c.D_pp + c.D_ppr, rel=1e-9, abs=1e-13)
    assert c.D_pp >= -1e-15 and c.D_ppr >= -1e-15
    if c.mode == "engine":
        assert c.eta <= c.carnot + 1e-9


@settings(max_examples=300, deadline=None)
@given(twice_s=st.integers(1, 5), seed=st.integers(0, 2**32 - 1), coupled=st.booleans())
def test_entropy_drop_is_necessary_for_work(twice_s, seed, coupled):
    rng = np.random.default_rng(seed)
    spin = SpinMagnitude(twice_s)
    B1, B2, T1, T2, J = draw_cycle(rng, twice_s, coupled)
    medium = "coupled" if coupled else "single"
    c = otto_cycle(spectrum(medium, spin, B1, J), spectrum(medium, spin, B2, J), T1, T2)
    if c.W > 1e-12:
        assert c.S1 > c.S2
