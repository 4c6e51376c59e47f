"""Curve data for the reference figures, with their pinned parameter sets."""
from __future__ import annotations

import numpy as np

from .coupled import (
    critical_coupling_bisect,
    critical_coupling_closed_form,
    efficiency_and_bound,
    efficiency_upper_bound,
    phi,
)
from .engine import analyze
from .errors import ModeError, NoBracketError
from .spectra import SpinMagnitude

SPIN_ONE = SpinMagnitude(2)

FIG_PARAMS = {
    "fig2": dict(B1=5.0, B2=3.0, T1=6.0, T2=3.0, spin=SPIN_ONE, J_from=0.0, J_to=0.4, J_steps=201),
    "fig3": dict(B1=5.0, B2=3.0, T1=6.0, T2=3.0, spin=SPIN_ONE, J_from=0.0, J_to=0.4, J_steps=201),
    "fig4": dict(B1=5.0, B2=3.0, theta=0.5, spin=SPIN_ONE, T1_from=0.5, T1_to=10.0, T1_steps=96),
    "fig5": dict(B1=5.0, B2=3.0, T1=6.0, T2=3.0, spin=SPIN_ONE, J_from=0.0, J_to=0.4, J_steps=201),
    "localwork": dict(B1=5.0, B2=3.0, T1=4.0, T2=2.0, spin=SPIN_ONE, J_from=0.0, J_to=0.4, J_steps=201),
}
FIGURES = tuple(FIG_PARAMS)


def _j_grid(p):
    return np.linspace(p["J_from"], p["J_to"], p["J_steps"])


def _reports(p):
    for J in _j_grid(p):
        yield analyze("coupled", p["spin"], p["B1"], p["B2"], p["T1"], p["T2"], float(J))


def fig2():
    """All tail margins (m = 6 .. 2) of P < P' against J."""
    p = FIG_PARAMS["fig2"]
    n = p["spin"].coupled_levels
    header = ["J"] + [f"margin_m{m}" for m in range(n, 1, -1)]
    rows = [[r.J, *r.majorisation.margins] for r in _reports(p)]
    return header, rows


def fig3():
    """Global work and the m = 2 margin against J."""
    p = FIG_PARAMS["fig3"]
    header = ["J", "W", "X", "margin_m2", "maj_holds"]
    rows = [[r.J, r.cycle.W, r.functionals.X, r.majorisation.margin(2), r.majorisation.holds]
            for r in _reports(p)]
    return header, rows


def _maybe_root(kind, p, T1, T2):
    try:
        return critical_coupling_bisect(kind, p["spin"], p["B1"], p["B2"], T1, T2).value
    except NoBracketError:
        return None


def fig4():
    """Critical couplings against the hot temperature at fixed T2/T1."""
    p = FIG_PARAMS["fig4"]
    header = ["T1", "T2", "phi_over_6", "Jc", "Jc_half", "Jc_spin", "Jc_half_general",
              "Jb_global", "Jb_global_pwc", "Jb_half", "Jb_spin"]
    rows = []
    s, B1, B2 = p["spin"], p["B1"], p["B2"]
    for T1 in np.linspace(p["T1_from"], p["T1_to"], p["T1_steps"]):
        T1 = float(T1)
        T2 = p["theta"] * T1
        rows.append([
            T1, T2, phi(B1, B2, T1, T2) / 6,
            critical_coupling_closed_form("global", s, B1, B2, T1, T2),
            critical_coupling_closed_form("half", s, B1, B2, T1, T2),
            critical_coupling_closed_form("spin", s, B1, B2, T1, T2),
            critical_coupling_closed_form("half", s, B1, B2, T1, T2, variant="general"),
            *(_maybe_root(k, p, T1, T2) for k in ("global_majorisation", "global_pwc", "half_pwc", "spin_pwc")),
        ])
    return header, rows


def fig5():
    """Efficiency, uncoupled efficiency, coupling bound and Carnot against J."""
    p = FIG_PARAMS["fig5"]
    header = ["J", "eta", "eta0", "eta_ub", "carnot"]
    carnot = 1.0 - p["T2"] / p["T1"]
    rows = []
    for r in _reports(p):
        f = r.functionals
        try:
            eta, eta0, eta_ub = efficiency_and_bound(r.spin, r.B1, r.B2, r.J, f.X, f.Y)
        except ModeError:
            eta, eta0 = None, r.eta0
            eta_ub = efficiency_upper_bound(r.spin, r.B1, r.B2, r.J)
        if not r.is_engine:
            eta = None
        rows.append([r.J, eta, eta0, eta_ub, carnot])
    return header, rows


def localwork():
    """Global and per-spin work against J."""
    p = FIG_PARAMS["localwork"]
    header = ["J", "W", "w_half", "w_spin"]
    rows = [[r.J, r.cycle.W, r.local.w_half, r.local.w_spin] for r in _reports(p)]
    return header, rows


BUILDERS = {"fig2": fig2, "fig3": fig3, "fig4": fig4, "fig5": fig5, "localwork": localwork}


def figure_data(name: str):
    if name not in BUILDERS:
        raise KeyError(f"unknown figure {name!r}; choose from {', '.join(FIGURES)}")
    return BUILDERS[name]()


PLOT_TEMPLATE = '''\
import csv
import sys

import matplotlib.pyplot as plt

path = sys.argv[1] if len(sys.argv) > 1 else "{csv}"
with open(path) as fh:
    rows = list(csv.DictReader(fh))
x = "{x}"
for col in {cols!r}:
    pts = [(float(r[x]), float(r[col])) for r in rows if r[col] not in ("", "true", "false")]
    if pts:
        plt.plot(*zip(*pts), label=col)
plt.xlabel(x)
plt.legend()
plt.savefig("{stem}.png", dpi=150)
'''


def plot_script(name: str, header, csv_name: str) -> str:
    x = header[0]
    cols = [c for c in header[1:] if c not in ("maj_holds", "T2")]
    return PLOT_TEMPLATE.format(csv=csv_name, x=x, cols=cols, stem=name)
