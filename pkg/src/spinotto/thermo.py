"""Canonical ensembles, entropies and the quasi-static Otto cycle bookkeeping."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import AbsoluteContinuityError, LengthMismatchError, MismatchedSpectraError, ParameterError
from .spectra import EnergySpectrum
from .tolerance import ABS_TOL


def logsumexp(x) -> float:
    x = np.asarray(x, dtype=float)
    xmax = x.max()
    return float(xmax + np.log(np.exp(x - xmax).sum()))


@dataclass(frozen=True, eq=False)
class ThermalDistribution:
    """Canonical occupation probabilities indexed by spectrum label.

    ``log_probs`` is kept alongside ``probs`` so that divergences stay finite
    when a probability underflows at low temperature.
    """

    probs: np.ndarray
    log_probs: np.ndarray
    temperature: float
    spectrum: EnergySpectrum

    def __len__(self):
        return len(self.probs)


def log_normalize(x) -> np.ndarray:
    """log(e^x / sum e^x), relative-accurate even for log p close to 0.

    The largest exponent is pulled out and the rest enter through log1p, so
    ln Z never absorbs a large constant that would swamp a tiny log p.
    """
    x = np.asarray(x, dtype=float)
    top = int(np.argmax(x))
    y = x - x[top]
    rest = np.exp(np.delete(y, top)).sum()
    return y - np.log1p(rest)


def canonical_distribution(spec: EnergySpectrum, T: float) -> ThermalDistribution:
    if not T > 0:
        raise ParameterError(f"temperature must be positive, got {T}")
    log_p = log_normalize(-spec.as_array() / T)
    p = np.exp(log_p)
    p.setflags(write=False)
    log_p.setflags(write=False)
    return ThermalDistribution(p, log_p, float(T), spec)


def _probs(d):
    return d.probs if isinstance(d, ThermalDistribution) else np.asarray(d, dtype=float)


def shannon_entropy(d) -> float:
    """-sum p ln p with 0 ln 0 = 0."""
    if isinstance(d, ThermalDistribution):
        p, logp = d.probs, d.log_probs
        return float(-np.sum(p * logp))
    p = np.asarray(d, dtype=float)
    nz = p > 0
    return float(-np.sum(p[nz] * np.log(p[nz])))


def relative_entropy(x, y) -> float:
    """Kullback-Leibler divergence D(x||y) = sum x_k (ln x_k - ln y_k)."""
    px, py = _probs(x), _probs(y)
    if px.shape != py.shape:
        raise LengthMismatchError(f"lengths differ: {px.shape} vs {py.shape}")
    if isinstance(x, ThermalDistribution) and isinstance(y, ThermalDistribution):
        return float(np.sum(px * (x.log_probs - y.log_probs)))
    support = px > 0
    if np.any(support & (py <= 0)):
        k = int(np.flatnonzero(support & (py <= 0))[0]) + 1
        raise AbsoluteContinuityError(f"x_{k} > 0 but y_{k} = 0")
    lx = np.log(px[support])
    ly = np.log(py[support])
    return float(np.sum(px[support] * (lx - ly)))


def operation_mode(Q1: float, Q2: float, W: float, atol: float = ABS_TOL) -> str:
    """'engine', 'refrigerator' or 'dud' from the heat/work signs."""
    if Q1 > atol and Q2 < -atol and W > atol:
        return "engine"
    if Q1 < -atol and Q2 > atol and W < -atol:
        return "refrigerator"
    return "dud"


@dataclass(frozen=True, eq=False)
class CycleReport:
    """Derived quantities of one quasi-static Otto cycle.

    Sign convention: Q1 > 0 is heat absorbed from the hot bath, Q2 < 0 heat
    rejected to the cold bath, and W = Q1 + Q2 the net extracted work.
    ``eta`` is None unless Q1 > 0.
    """

    Q1: float
    Q2: float
    W: float
    eta: Optional[float]
    S1: float
    S2: float
    D_pp: float
    D_ppr: float
    dS_tot: float
    mode: str
    T1: float
    T2: float
    hot: Optional[ThermalDistribution] = None
    cold: Optional[ThermalDistribution] = None

    @property
    def W_mag(self) -> float:
        return self.W

    @property
    def carnot(self) -> float:
        return 1.0 - self.T2 / self.T1


def _check_pair(spec_hot: EnergySpectrum, spec_cold: EnergySpectrum):
    if spec_hot.n != spec_cold.n:
        raise MismatchedSpectraError(f"label counts differ: {spec_hot.n} vs {spec_cold.n}")
    if spec_hot.medium != spec_cold.medium or spec_hot.spin != spec_cold.spin:
        raise MismatchedSpectraError("spectra come from different media")
    if spec_hot.J != spec_cold.J:
        raise MismatchedSpectraError(f"J differs between strokes: {spec_hot.J} vs {spec_cold.J}")


def population_difference(P, Pp) -> np.ndarray:
    """P - P' with the dominant label fixed by normalisation instead of subtraction.

    Near-unit populations lose their small difference to rounding; every
    other entry is a difference of small, relative-accurate numbers.
    """
    diff = P.probs - Pp.probs
    ref = int(np.argmax(P.probs + Pp.probs))
    diff[ref] = -(diff.sum() - diff[ref])
    return diff


def cycle_from_distributions(P: ThermalDistribution, Pp: ThermalDistribution) -> CycleReport:
    eps, epsp = P.spectrum.as_array(), Pp.spectrum.as_array()
    diff = population_difference(P, Pp)
    ref = int(np.argmax(P.probs + Pp.probs))
    # sum_k D_k = 0, so energies may be measured from the reference label
    Q1 = float(np.dot(eps - eps[ref], diff))
    Q2 = float(-np.dot(epsp - epsp[ref], diff))
    W = float(np.dot((eps - eps[ref]) - (epsp - epsp[ref]), diff))
    T1, T2 = P.temperature, Pp.temperature
    D_pp = relative_entropy(P, Pp)
    D_ppr = relative_entropy(Pp, P)
    return CycleReport(
        Q1=Q1, Q2=Q2, W=W,
        eta=W / Q1 if Q1 > 0 else None,
        S1=shannon_entropy(P), S2=shannon_entropy(Pp),
        D_pp=D_pp, D_ppr=D_ppr,
        dS_tot=-Q2 / T2 - Q1 / T1,
        mode=operation_mode(Q1, Q2, W),
        T1=T1, T2=T2, hot=P, cold=Pp,
    )


def otto_cycle(spec_hot: EnergySpectrum, spec_cold: EnergySpectrum, T1: float, T2: float) -> CycleReport:
    """Label-sum heats Q1 = sum eps_k (P_k - P'_k), Q2 = sum eps'_k (P'_k - P_k)."""
    _check_pair(spec_hot, spec_cold)
    if not T2 > 0:
        raise ParameterError(f"T2 must be positive, got {T2}")
    if not T1 > T2:
        raise ParameterError(f"need T1 > T2, got T1={T1}, T2={T2}")
    return cycle_from_distributions(canonical_distribution(spec_hot, T1), canonical_distribution(spec_cold, T2))


def heats_via_divergence(P: ThermalDistribution, Pp: ThermalDistribution):
    """(Q1, Q2) from entropies and relative entropies instead of energies."""
    T1, T2 = P.temperature, Pp.temperature
    dS = shannon_entropy(P) - shannon_entropy(Pp)
    Q1 = T1 * dS - T1 * relative_entropy(Pp, P)
    Q2 = -T2 * dS - T2 * relative_entropy(P, Pp)
    return Q1, Q2


def work_via_divergence(P: ThermalDistribution, Pp: ThermalDistribution) -> float:
    T1, T2 = P.temperature, Pp.temperature
    dS = shannon_entropy(P) - shannon_entropy(Pp)
    return (T1 - T2) * dS - T1 * relative_entropy(Pp, P) - T2 * relative_entropy(P, Pp)
