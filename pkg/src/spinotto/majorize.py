"""Majorisation partial order between hot and cold canonical distributions.

``majorises(x, y)`` tests x < y ("x is majorised by y"): after sorting both
in descending order, every tail sum of x dominates the matching tail sum of y.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import LengthMismatchError, NormalizationError, ParameterError, UnorderedSpectrumError
from .thermo import ThermalDistribution
from .tolerance import MARGIN_TOL, NORM_TOL


@dataclass(frozen=True)
class MajorisationReport:
    """Verdict for x < y.

    ``margins[i]`` is the tail-sum difference for m = n - i, i.e. the tuple
    runs m = n, n-1, ..., 2.
    """

    holds: bool
    margins: tuple
    first_violated_m: Optional[int]
    tolerance_used: float

    @property
    def n(self) -> int:
        return len(self.margins) + 1

    def margin(self, m: int) -> float:
        if not 2 <= m <= self.n:
            raise IndexError(f"m must be in [2, {self.n}], got {m}")
        return self.margins[self.n - m]

    @property
    def min_margin(self) -> float:
        return min(self.margins) if self.margins else 0.0


def _validated(x, check_order=True) -> np.ndarray:
    if isinstance(x, ThermalDistribution):
        if check_order and not x.spectrum.ordered:
            raise UnorderedSpectrumError(
                f"spectrum at B={x.spectrum.B}, J={x.spectrum.J} is below the level-crossing threshold"
            )
        return x.probs
    return np.asarray(x, dtype=float)


def _pair(x, y):
    px, py = _validated(x), _validated(y)
    if px.ndim != 1 or px.shape != py.shape:
        raise LengthMismatchError(f"lengths differ: {px.shape} vs {py.shape}")
    for name, p in (("x", px), ("y", py)):
        if abs(p.sum() - 1.0) > NORM_TOL:
            raise NormalizationError(f"{name} sums to {p.sum():.15g}")
    return px, py


def sorted_descending(p) -> np.ndarray:
    """Descending sort; ties keep ascending label order."""
    p = np.asarray(p, dtype=float)
    return p[np.argsort(-p, kind="stable")]


def tail_sums(p) -> np.ndarray:
    """sum_{k>=m} p_k of the descending-sorted input, for m = n down to 2."""
    # accumulating from the smallest entry keeps tiny tails relative-accurate
    return np.cumsum(sorted_descending(p)[::-1])[:-1]


def tail_margins(x, y) -> np.ndarray:
    """sum_{k>=m} (x_k - y_k) on descending-sorted inputs, for m = n down to 2."""
    return tail_sums(x) - tail_sums(y)


def margin_thresholds(x, y, tol: float) -> np.ndarray:
    """Allowed deficit per margin: tol times the larger tail mass (never above tol)."""
    return tol * np.maximum(tail_sums(x), tail_sums(y))


def majorises(x, y, tol: float = MARGIN_TOL) -> MajorisationReport:
    """x < y; margin m may fall short by at most tol times its larger tail mass."""
    px, py = _pair(x, y)
    margins = tail_margins(px, py)
    n = len(px)
    bad = np.flatnonzero(margins < -margin_thresholds(px, py, tol))
    first = int(n - bad[0]) if bad.size else None
    return MajorisationReport(
        holds=first is None,
        margins=tuple(float(v) for v in margins),
        first_violated_m=first,
        tolerance_used=float(tol),
    )


def single_spin_majorisation_condition(B1: float, B2: float, T1: float, T2: float) -> bool:
    """B2/T2 >= B1/T1, compared exactly on the binary values."""
    for name, v in (("B1", B1), ("B2", B2), ("T1", T1), ("T2", T2)):
        if not v > 0:
            raise ParameterError(f"{name} must be positive, got {v}")
    return Fraction(B2) * Fraction(T1) >= Fraction(B1) * Fraction(T2)


def extreme_case_holds(P, Pp, tol: float = MARGIN_TOL) -> bool:
    """P_k >= P'_k for every descending-sorted component k = 2..n."""
    px, py = _pair(P, Pp)
    xs, ys = sorted_descending(px), sorted_descending(py)
    return bool(np.all(xs[1:] >= ys[1:] - tol))


def gap_ratio_condition(P: ThermalDistribution, Pp: ThermalDistribution) -> bool:
    """(spectral range at cold)/T2 >= (spectral range at hot)/T1."""
    eh, ec = P.spectrum.as_array(), Pp.spectrum.as_array()
    lhs = Fraction(float(ec.max() - ec.min())) * Fraction(P.temperature)
    rhs = Fraction(float(eh.max() - eh.min())) * Fraction(Pp.temperature)
    return lhs >= rhs


def single_spin_work_functional(P, Pp) -> float:
    """X = sum_{k>=2} (k-1)(P_k - P'_k); the single-spin work is 2(B1 - B2) X."""
    px, py = _pair(P, Pp)
    return float(np.dot(np.arange(len(px)), px - py))
