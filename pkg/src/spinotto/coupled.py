"""The coupled (1/2, s) engine: work functionals, critical couplings, local work, efficiency.

Probability differences D_k = P_k - P'_k are always taken label by label,
never after sorting.  With n = 2(2s+1) levels and N = 2s+1:

    X = sum_{k=1}^{N-1} k (D_2k + D_2k+1) + N D_n      (global work / 2(B1-B2))
    Y = sum_{k=1}^{N-1} D_2k                            (heat held by the J-shifted levels)
    Z = sum_k (N - 2k)(D_2k - D_n-2k)                   (asymmetry between the two spins)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import (
    DimensionError,
    DomainError,
    ModeError,
    NoBracketError,
    ParameterError,
    SingularityError,
    UnorderedSpectrumError,
)
from .majorize import single_spin_majorisation_condition
from .spectra import as_spin, coupled_level_coefficients
from .thermo import ThermalDistribution
from .tolerance import MARGIN_TOL

KINDS_CLOSED = ("global", "half", "spin")
KINDS_BISECT = ("global_majorisation", "global_pwc", "half_pwc", "spin_pwc")


def _coupled_probs(P, spin) -> np.ndarray:
    if isinstance(P, ThermalDistribution):
        if not P.spectrum.ordered:
            raise UnorderedSpectrumError(
                f"spectrum at B={P.spectrum.B}, J={P.spectrum.J} is below the level-crossing threshold"
            )
        p = P.probs
    else:
        p = np.asarray(P, dtype=float)
    if p.shape != (spin.coupled_levels,):
        raise DimensionError(f"expected {spin.coupled_levels} levels for s={spin}, got {p.shape}")
    return p


@lru_cache(maxsize=None)
def _functional_weights(twice_s: int):
    N = twice_s + 1
    n = 2 * N
    wX, wY, wZ = np.zeros(n), np.zeros(n), np.zeros(n)
    # index i holds label i + 1
    for k in range(1, N):
        wX[2 * k - 1] += k
        wX[2 * k] += k
        wY[2 * k - 1] += 1
    wX[n - 1] += N
    if twice_s % 2 == 0:
        upper = N // 2  # n/4 - 1/2 = s
    else:
        upper = N // 2 - 1  # n/4 - 1 = s - 1/2
    for k in range(1, upper + 1):
        wZ[2 * k - 1] += N - 2 * k
        wZ[n - 2 * k - 1] -= N - 2 * k
    for w in (wX, wY, wZ):
        w.setflags(write=False)
    return wX, wY, wZ


def functional_weights(s):
    """Label weight vectors (wX, wY, wZ) so that X = D @ wX etc."""
    return _functional_weights(as_spin(s).twice_s)


@dataclass(frozen=True)
class Functionals:
    X: float
    Y: float
    Z: float


def functionals(P, Pp, s) -> Functionals:
    spin = as_spin(s)
    D = _coupled_probs(P, spin) - _coupled_probs(Pp, spin)
    wX, wY, wZ = functional_weights(spin)
    return Functionals(float(D @ wX), float(D @ wY), float(D @ wZ))


# --- temperature-field threshold and closed-form critical couplings -------


def _check_positive(**kw):
    for name, v in kw.items():
        if not v > 0:
            raise ParameterError(f"{name} must be positive, got {v}")


def phi(B1: float, B2: float, T1: float, T2: float) -> float:
    """(B2/T2 - B1/T1) / (1/T2 - 1/T1)."""
    _check_positive(B1=B1, B2=B2, T1=T1, T2=T2)
    if T1 == T2:
        raise ParameterError("phi is undefined for T1 == T2")
    return (B2 / T2 - B1 / T1) / (1.0 / T2 - 1.0 / T1)


def phi_theta(B1: float, B2: float, T1: float, T2: float) -> float:
    """The same threshold written with theta = T2/T1: (B2 - B1 theta)/(1 - theta)."""
    _check_positive(B1=B1, B2=B2, T1=T1, T2=T2)
    if T1 == T2:
        raise ParameterError("phi is undefined for T1 == T2")
    theta = T2 / T1
    return (B2 - B1 * theta) / (1.0 - theta)


def _check_engine_params(B1, B2, T1, T2):
    _check_positive(B1=B1, B2=B2, T1=T1, T2=T2)
    if not B1 > B2:
        raise ParameterError(f"need B1 > B2, got B1={B1}, B2={B2}")
    if not T1 > T2:
        raise ParameterError(f"need T1 > T2, got T1={T1}, T2={T2}")
    if not single_spin_majorisation_condition(B1, B2, T1, T2):
        raise DomainError(f"B2/T2 = {B2 / T2:.6g} < B1/T1 = {B1 / T1:.6g}; no critical coupling is defined")


def _log_ratio(f, B1, B2, T1, T2):
    return math.log(f(B1 / T1) / f(B2 / T2))


def default_variant(s) -> str:
    return "spin_one" if as_spin(s).twice_s == 2 else "general"


def critical_coupling_closed_form(kind: str, s, B1: float, B2: float, T1: float, T2: float,
                                  variant: Optional[str] = None) -> float:
    """Closed-form sufficient coupling bound of the requested kind.

    ``variant="spin_one"`` is only available at s = 1 and uses the specialised
    spin-1 expressions; ``"general"`` evaluates the general-s expressions.
    For half-integer s the sums over m run to floor(s).  The two half-kind
    variants disagree at s = 1; ``critical_coupling_bisect`` is the arbiter.
    """
    spin = as_spin(s)
    if kind not in KINDS_CLOSED:
        raise ParameterError(f"kind must be one of {KINDS_CLOSED}, got {kind!r}")
    variant = variant or default_variant(spin)
    if variant == "spin_one" and spin.twice_s != 2:
        raise ParameterError("the 'spin_one' closed forms exist only for s = 1")
    if variant not in ("spin_one", "general"):
        raise ParameterError(f"unknown variant {variant!r}")
    _check_engine_params(B1, B2, T1, T2)

    N = spin.multiplicity
    sv = spin.value
    ms = range(1, spin.twice_s // 2 + 1)
    c = 1.0 / (1.0 / T2 - 1.0 / T1)
    base = phi(B1, B2, T1, T2) / (2 * N)

    if variant == "spin_one":
        fs = {
            "global": lambda x: 1 + math.exp(-2 * x),
            "half": lambda x: 2 + math.exp(-2 * x),
            "spin": lambda x: 1 + 5 * math.exp(-2 * x),
        }
    else:
        fs = {
            "global": lambda x: 1 + sum(math.exp(-(m + 1) * x) for m in ms),
            "half": lambda x: N + sum((2 * sv - m + 1) * math.exp(-(m + 2) * x) for m in ms),
            "spin": lambda x: 1 + sum((2 * m * sv + 2 * m + 1) * math.exp(-(m + 1) * x) for m in ms),
        }
    return base + c / (4 * N) * _log_ratio(fs[kind], B1, B2, T1, T2)


def closed_form_note(kind: str, s, variant: Optional[str] = None) -> str:
    spin = as_spin(s)
    variant = variant or default_variant(spin)
    if variant == "spin_one":
        note = f"{kind}: specialised spin-1 expression"
        if kind == "half":
            note += "; can exceed the half_pwc bisection root, unlike the general variant"
        return note
    note = f"{kind}: general (1/2,s) expression evaluated at s={spin}"
    if not spin.is_integer:
        note += "; m-sum truncated at floor(s)"
    if kind == "half":
        note += "; does not reduce to the spin-1 expression at s=1"
    return note


# --- exact predicates and the bisection oracle ----------------------------


def _cycle_probs(spin, B1, B2, T1, T2, Js):
    """Hot and cold label probabilities for every J in ``Js``; shape (len(Js), n)."""
    coeffs = np.array(coupled_level_coefficients(spin), dtype=float)
    a, b = coeffs[:, 0], coeffs[:, 1]
    Js = np.atleast_1d(np.asarray(Js, dtype=float))[:, None]
    out = []
    for B, T in ((B1, T1), (B2, T2)):
        x = -(a * B + b * Js) / T
        x = x - x.max(axis=1, keepdims=True)
        w = np.exp(x)
        out.append(w / w.sum(axis=1, keepdims=True))
    return out


def predicate_values(kind: str, s, B1, B2, T1, T2, Js) -> np.ndarray:
    """Signed predicate value per J; the predicate holds where the value is >= 0.

    global_majorisation: smallest tail margin over its tail mass; global_pwc: X; half_pwc: X + Z;
    spin_pwc: 2s X - Z.
    """
    spin = as_spin(s)
    P, Pp = _cycle_probs(spin, B1, B2, T1, T2, Js)
    if kind == "global_majorisation":
        tx = np.cumsum(np.sort(P, axis=1), axis=1)[:, :-1]
        ty = np.cumsum(np.sort(Pp, axis=1), axis=1)[:, :-1]
        scale = np.maximum(tx, ty)
        rel = np.divide(tx - ty, scale, out=np.zeros_like(tx), where=scale > 0)
        return rel.min(axis=1)
    D = P - Pp
    wX, _, wZ = functional_weights(spin)
    X, Z = D @ wX, D @ wZ
    if kind == "global_pwc":
        return X
    if kind == "half_pwc":
        return X + Z
    if kind == "spin_pwc":
        return spin.twice_s * X - Z
    raise ParameterError(f"kind must be one of {KINDS_BISECT}, got {kind!r}")


@dataclass(frozen=True)
class BisectionRoot:
    """Largest J (to ``tol``) where a predicate still holds.

    ``sign_changes`` counts hold/fail transitions on the scan grid; more than
    one means the predicate is not monotone in J and ``value`` is the first.
    """

    kind: str
    value: float
    sign_changes: int
    iterations: int
    upper_bound: float

    @property
    def monotone(self) -> bool:
        return self.sign_changes <= 1

    def __float__(self):
        return self.value


def critical_coupling_bisect(kind: str, s, B1: float, B2: float, T1: float, T2: float,
                             tol: float = 1e-9, grid: int = 1024, max_iter: int = 200,
                             pred_tol: float = MARGIN_TOL) -> BisectionRoot:
    spin = as_spin(s)
    if kind not in KINDS_BISECT:
        raise ParameterError(f"kind must be one of {KINDS_BISECT}, got {kind!r}")
    if not tol > 0:
        raise ParameterError(f"tol must be positive, got {tol}")
    _check_positive(B1=B1, B2=B2, T1=T1, T2=T2)
    upper = B2 / (2 * spin.multiplicity)

    def holds(J):
        return predicate_values(kind, spin, B1, B2, T1, T2, J) >= -pred_tol

    Js = np.linspace(0.0, upper, grid + 1)[:-1]
    ok = holds(Js)
    if not ok[0]:
        raise DomainError(f"{kind} predicate already fails at J=0 (is B2/T2 >= B1/T1?)")
    changes = int(np.count_nonzero(ok[1:] != ok[:-1]))
    fails = np.flatnonzero(~ok)
    if fails.size == 0:
        raise NoBracketError(f"{kind} predicate holds on all of [0, {upper:.6g})")
    lo, hi = float(Js[fails[0] - 1]), float(Js[fails[0]])
    it = 0
    while hi - lo > tol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if holds(mid)[0]:
            lo = mid
        else:
            hi = mid
        it += 1
    return BisectionRoot(kind, lo, changes, it, upper)


@dataclass(frozen=True)
class CriticalCouplings:
    phi: float
    j_c_global: float
    j_c_half: float
    j_c_spin: float
    j_c_half_general: float
    j_bisect_global: float
    j_bisect_global_pwc: float
    j_bisect_half: float
    j_bisect_spin: float
    monotone: bool
    notes: tuple = field(default_factory=tuple)

    def deltas(self) -> dict:
        """Closed form minus bisection root for each kind."""
        return {
            "global": self.j_c_global - self.j_bisect_global,
            "half": self.j_c_half - self.j_bisect_half,
            "spin": self.j_c_spin - self.j_bisect_spin,
        }


def critical_couplings(s, B1, B2, T1, T2, tol: float = 1e-9) -> CriticalCouplings:
    spin = as_spin(s)
    closed = {k: critical_coupling_closed_form(k, spin, B1, B2, T1, T2) for k in KINDS_CLOSED}
    half_app = critical_coupling_closed_form("half", spin, B1, B2, T1, T2, variant="general")
    roots = {}
    notes = [closed_form_note(k, spin) for k in KINDS_CLOSED]
    if spin.twice_s == 2:
        notes.append("half (general variant) evaluated separately as j_c_half_general")
    for k in KINDS_BISECT:
        try:
            roots[k] = critical_coupling_bisect(k, spin, B1, B2, T1, T2, tol=tol)
        except NoBracketError:
            roots[k] = None
            notes.append(f"{k}: predicate holds up to the level-crossing bound B2/(2(2s+1))")

    def val(r):
        return r.value if r is not None else float("nan")

    return CriticalCouplings(
        phi=phi(B1, B2, T1, T2),
        j_c_global=closed["global"], j_c_half=closed["half"], j_c_spin=closed["spin"],
        j_c_half_general=half_app,
        j_bisect_global=val(roots["global_majorisation"]),
        j_bisect_global_pwc=val(roots["global_pwc"]),
        j_bisect_half=val(roots["half_pwc"]),
        j_bisect_spin=val(roots["spin_pwc"]),
        monotone=all(r is None or r.monotone for r in roots.values()),
        notes=tuple(notes),
    )


# --- reduced single-spin states -------------------------------------------


@lru_cache(maxsize=None)
def _mixing_weights(twice_s: int):
    """Rows: coupled labels; columns: local levels in ascending local energy.

    Level 2k (total spin s-1/2) and 2k+1 (total spin s+1/2) share total
    magnetisation M = k - N/2; the Clebsch-Gordan weights put the spin-1/2
    up with the spin-s at local level k, or down with it at level k+1.
    """
    N = twice_s + 1
    n = 2 * N
    half = np.zeros((n, 2))
    loc = np.zeros((n, N))
    half[0, 0] = 1.0
    loc[0, 0] = 1.0
    for k in range(1, N):
        for idx, w_up in ((2 * k - 1, (N - k) / N), (2 * k, k / N)):
            half[idx, 1] = w_up
            half[idx, 0] = 1.0 - w_up
            loc[idx, k - 1] = w_up
            loc[idx, k] = 1.0 - w_up
    half[n - 1, 1] = 1.0
    loc[n - 1, N - 1] = 1.0
    half.setflags(write=False)
    loc.setflags(write=False)
    return half, loc


def reduced_distributions(P, s):
    """Spin-1/2 marginal (q1, q2) and spin-s marginal (r_1..r_{2s+1}), ground level first."""
    spin = as_spin(s)
    p = _coupled_probs(P, spin)
    half, loc = _mixing_weights(spin.twice_s)
    return p @ half, p @ loc


def constant_coefficient_spin_marginal(P, s) -> np.ndarray:
    """Spin-s marginal from closed forms for r_1, r_k, r_{2s+1} with constant coefficients 2s, 2s-1.

    Matches ``reduced_distributions`` only for s <= 1 (the true interior
    weights depend on k); kept to document the discrepancy at larger s.
    """
    spin = as_spin(s)
    p = _coupled_probs(P, spin)
    N = spin.multiplicity
    ts = spin.twice_s
    lab = lambda j: p[j - 1]  # noqa: E731
    r = np.empty(N)
    r[0] = (N * lab(1) + ts * lab(2) + lab(3)) / N
    for k in range(2, N):
        r[k - 1] = ((k - 1) * lab(2 * k - 2) + ts * lab(2 * k - 1) + (ts - 1) * lab(2 * k) + k * lab(2 * k + 1)) / N
    r[N - 1] = (ts * lab(2 * ts) + lab(2 * ts + 1) + N * lab(2 * ts + 2)) / N
    return r


# --- local work -------------------------------------------------------------


@dataclass(frozen=True)
class LocalWorkReport:
    w_half: float
    w_spin: float
    q_half: tuple
    r_spin: tuple
    q_half_cold: tuple
    r_spin_cold: tuple

    @property
    def total(self) -> float:
        return self.w_half + self.w_spin


def local_work(P, Pp, s, B1: float, B2: float) -> LocalWorkReport:
    """Per-spin works from X and Z: w_half = 2(B1-B2)(X+Z)/N, w_spin = 2(B1-B2)(2sX-Z)/N."""
    spin = as_spin(s)
    N = spin.multiplicity
    f = functionals(P, Pp, spin)
    q, r = reduced_distributions(P, spin)
    qc, rc = reduced_distributions(Pp, spin)
    pre = 2.0 * (B1 - B2) / N
    return LocalWorkReport(
        w_half=pre * (f.X + f.Z),
        w_spin=pre * (spin.twice_s * f.X - f.Z),
        q_half=tuple(q), r_spin=tuple(r),
        q_half_cold=tuple(qc), r_spin_cold=tuple(rc),
    )


def local_work_from_marginals(P, Pp, s, B1: float, B2: float):
    """Per-spin works from the reduced populations; independent of X and Z."""
    spin = as_spin(s)
    q, r = reduced_distributions(P, spin)
    qc, rc = reduced_distributions(Pp, spin)
    w_half = 2.0 * (B1 - B2) * (q[1] - qc[1])
    w_spin = 2.0 * (B1 - B2) * float(np.dot(np.arange(spin.multiplicity), r - rc))
    return w_half, w_spin


# --- efficiency -------------------------------------------------------------


def uncoupled_efficiency(B1: float, B2: float) -> float:
    return 1.0 - B2 / B1


def efficiency_upper_bound(s, B1: float, B2: float, J: float) -> float:
    """eta0 / (1 - 2(2s+1)J/B1)."""
    spin = as_spin(s)
    g = 2 * spin.multiplicity * J
    if g >= B1:
        raise SingularityError(f"2(2s+1)J = {g:.6g} >= B1 = {B1:.6g}")
    return uncoupled_efficiency(B1, B2) / (1.0 - g / B1)


def efficiency_and_bound(s, B1: float, B2: float, J: float, X: float, Y: float):
    """(eta, eta0, eta_ub) for an engine-mode cycle."""
    spin = as_spin(s)
    if not X > 0:
        raise ModeError(f"X = {X:.6g} <= 0: the cycle does not produce work")
    eta_ub = efficiency_upper_bound(spin, B1, B2, J)
    eta0 = uncoupled_efficiency(B1, B2)
    eta = eta0 / (1.0 - 2 * spin.multiplicity * J * Y / (B1 * X))
    return eta, eta0, eta_ub
