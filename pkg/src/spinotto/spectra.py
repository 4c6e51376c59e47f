"""Energy spectra for the single spin-s and the coupled (1/2, s) working media.

Energies are in units with k_B = hbar = mu_B = 1 and gyromagnetic ratio 2.
Labels run 1..n and are adiabatic invariants: level k at field B1 maps to
level k at field B2.  Above the ordering threshold the labels also sort the
levels by energy.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class SpinMagnitude:
    """A spin magnitude s >= 1/2, stored as the integer 2s."""

    twice_s: int

    def __post_init__(self):
        if isinstance(self.twice_s, bool) or not isinstance(self.twice_s, (int, np.integer)):
            raise ParameterError(f"twice_s must be an integer, got {self.twice_s!r}")
        if self.twice_s < 1:
            raise ParameterError(f"twice_s must be >= 1, got {self.twice_s}")
        object.__setattr__(self, "twice_s", int(self.twice_s))

    @classmethod
    def from_value(cls, s) -> "SpinMagnitude":
        """Build from ``1``, ``1.5`` or ``"3/2"``."""
        twice = Fraction(s) * 2 if not isinstance(s, str) else Fraction(s.strip()) * 2
        if twice.denominator != 1:
            raise ParameterError(f"s must be a half-integer, got {s!r}")
        return cls(int(twice))

    @property
    def s(self) -> Fraction:
        return Fraction(self.twice_s, 2)

    @property
    def value(self) -> float:
        return self.twice_s / 2

    @property
    def multiplicity(self) -> int:
        """2s + 1, the number of single-spin levels."""
        return self.twice_s + 1

    @property
    def coupled_levels(self) -> int:
        return 2 * (self.twice_s + 1)

    @property
    def is_integer(self) -> bool:
        return self.twice_s % 2 == 0

    def magnetic_numbers(self) -> np.ndarray:
        """m = s, s-1, ..., -s (descending, the basis order used everywhere)."""
        return np.arange(self.twice_s, -self.twice_s - 1, -2) / 2.0

    def __str__(self):
        return str(self.twice_s // 2) if self.is_integer else f"{self.twice_s}/2"


def as_spin(s) -> SpinMagnitude:
    if isinstance(s, SpinMagnitude):
        return s
    return SpinMagnitude.from_value(s)


@dataclass(frozen=True)
class EnergySpectrum:
    """Label-ordered energies of one working medium at fixed (s, B, J).

    ``energies[k-1]`` is the energy of label k.  ``shift`` is the constant
    that was added to the raw Hamiltonian eigenvalues.  ``ordered`` is False
    when B is at or below the level-crossing threshold.
    """

    medium: str
    spin: SpinMagnitude
    B: float
    J: float
    energies: tuple
    shift: float = 0.0
    ordered: bool = True

    @property
    def n(self) -> int:
        return len(self.energies)

    @property
    def labels(self) -> range:
        return range(1, self.n + 1)

    @property
    def levels(self):
        return list(zip(self.labels, self.energies))

    def as_array(self) -> np.ndarray:
        return np.array(self.energies, dtype=float)


def single_spin_spectrum(s, B: float) -> EnergySpectrum:
    """Zeeman levels eps_k = 2(k - s - 1) B for k = 1..2s+1."""
    spin = as_spin(s)
    if not B > 0:
        raise ParameterError(f"B must be positive, got {B}")
    # 2(k - s - 1) = 2k - twice_s - 2, an exact integer
    energies = tuple(float((2 * k - spin.twice_s - 2) * B) for k in range(1, spin.multiplicity + 1))
    return EnergySpectrum("single", spin, float(B), 0.0, energies, 0.0, True)


def coupled_level_coefficients(s):
    """Integer pairs (a_k, b_k) with eps_k = a_k B + b_k J for the shifted coupled spectrum.

    Odd labels (and the top level) belong to total spin s + 1/2, even labels
    2..n-2 to total spin s - 1/2, whose exchange energy sits 4(2s+1)J lower.
    """
    spin = as_spin(s)
    N = spin.multiplicity
    coeffs = [(-N, 0)]
    for k in range(1, N):
        coeffs.append((2 * k - N, -4 * N))
        coeffs.append((2 * k - N, 0))
    coeffs.append((N, 0))
    return coeffs


def ordering_threshold(s, J: float) -> float:
    """Field 2(2s+1)J above which coupled labels are strictly energy ordered."""
    spin = as_spin(s)
    if J < 0:
        raise ParameterError(f"J must be >= 0, got {J}")
    return 2 * spin.multiplicity * J


def is_ordered(s, B: float, J: float) -> bool:
    spin = as_spin(s)
    return Fraction(B) > 2 * spin.multiplicity * Fraction(J)


def coupled_spectrum(s, B: float, J: float) -> EnergySpectrum:
    """Shifted spectrum of the spin-1/2 (x) spin-s Heisenberg pair.

    eps_1 = -(2s+1)B; eps_2k = (2k-(2s+1))B - 4(2s+1)J; eps_2k+1 = (2k-(2s+1))B;
    eps_n = (2s+1)B.  These are the raw eigenvalues minus 4sJ.
    """
    spin = as_spin(s)
    if not B > 0:
        raise ParameterError(f"B must be positive, got {B}")
    if J < 0:
        raise ParameterError(f"J must be >= 0, got {J}")
    energies = tuple(float(a * B + b * J) for a, b in coupled_level_coefficients(spin))
    return EnergySpectrum(
        "coupled", spin, float(B), float(J), energies,
        shift=-2.0 * spin.twice_s * J,
        ordered=is_ordered(spin, B, J),
    )


def spectrum(medium: str, s, B: float, J: float = 0.0) -> EnergySpectrum:
    if medium == "single":
        return single_spin_spectrum(s, B)
    if medium == "coupled":
        return coupled_spectrum(s, B, J)
    raise ParameterError(f"unknown medium {medium!r}")


def spin_operators(s):
    """Real (sz, s+, s-) matrices in the descending-m basis."""
    spin = as_spin(s)
    m = spin.magnetic_numbers()
    sv = spin.value
    sz = np.diag(m)
    # <m+1| s+ |m> = sqrt(s(s+1) - m(m+1))
    up = np.sqrt(sv * (sv + 1) - m[1:] * (m[1:] + 1))
    splus = np.diag(up, k=1)
    return sz, splus, splus.T.copy()


@dataclass(frozen=True)
class DenseHamiltonian:
    matrix: np.ndarray
    spin: SpinMagnitude
    B: float
    J: float
    medium: str = "coupled"

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def hamiltonian_matrix(s, B: float, J: float) -> DenseHamiltonian:
    """H = 2B(sz(x)1 + 1(x)sz) + 8J s1.s2 in the (half (x) spin) product basis, m descending."""
    spin = as_spin(s)
    half = SpinMagnitude(1)
    hz, hp, hm = spin_operators(half)
    sz, sp, sm = spin_operators(spin)
    ih, isp = np.eye(2), np.eye(spin.multiplicity)
    zeeman = np.kron(hz, isp) + np.kron(ih, sz)
    # sx(x)sx + sy(x)sy = (s+(x)s- + s-(x)s+)/2
    exchange = np.kron(hz, sz) + 0.5 * (np.kron(hp, sm) + np.kron(hm, sp))
    H = 2.0 * B * zeeman + 8.0 * J * exchange
    H = 0.5 * (H + H.T)
    H.setflags(write=False)
    return DenseHamiltonian(H, spin, float(B), float(J), "coupled")


def zeeman_matrix(s, B: float) -> DenseHamiltonian:
    """H = 2B sz for a lone spin-s."""
    spin = as_spin(s)
    sz, _, _ = spin_operators(spin)
    H = 2.0 * B * sz
    H.setflags(write=False)
    return DenseHamiltonian(H, spin, float(B), 0.0, "single")
