"""One-call analysis of a cycle, combining thermo, majorize and coupled results."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .coupled import (
    Functionals,
    LocalWorkReport,
    efficiency_upper_bound,
    functionals,
    local_work,
    uncoupled_efficiency,
)
from .errors import SingularityError
from .majorize import MajorisationReport, majorises, single_spin_work_functional
from .spectra import SpinMagnitude, as_spin, spectrum
from .thermo import CycleReport, otto_cycle

CSV_COLUMNS = (
    "J", "Q1", "Q2", "W", "eta", "eta0", "eta_ub", "S1", "S2", "D_P_Pp", "D_Pp_P",
    "dS_tot", "X", "Y", "Z", "w_half", "w_spin", "maj_holds", "mode",
)


@dataclass(frozen=True, eq=False)
class EngineReport:
    medium: str
    twice_s: int
    B1: float
    B2: float
    T1: float
    T2: float
    J: float
    cycle: CycleReport
    majorisation: Optional[MajorisationReport]
    functionals: Optional[Functionals]
    local: Optional[LocalWorkReport]
    eta0: float
    eta_ub: Optional[float]

    @property
    def spin(self) -> SpinMagnitude:
        return SpinMagnitude(self.twice_s)

    @property
    def is_engine(self) -> bool:
        return self.cycle.mode == "engine"

    def row(self) -> dict:
        c, f, lw = self.cycle, self.functionals, self.local
        return {
            "J": self.J, "Q1": c.Q1, "Q2": c.Q2, "W": c.W,
            "eta": c.eta if c.mode == "engine" else None,
            "eta0": self.eta0, "eta_ub": self.eta_ub,
            "S1": c.S1, "S2": c.S2, "D_P_Pp": c.D_pp, "D_Pp_P": c.D_ppr, "dS_tot": c.dS_tot,
            "X": f.X if f else None, "Y": f.Y if f else None, "Z": f.Z if f else None,
            "w_half": lw.w_half if lw else None, "w_spin": lw.w_spin if lw else None,
            "maj_holds": self.majorisation.holds if self.majorisation else None,
            "mode": c.mode,
        }


def analyze(medium: str, s, B1: float, B2: float, T1: float, T2: float, J: float = 0.0,
            tol: float = 1e-12) -> EngineReport:
    spin = as_spin(s)
    hot = spectrum(medium, spin, B1, J)
    cold = spectrum(medium, spin, B2, J)
    cyc = otto_cycle(hot, cold, T1, T2)
    ordered = hot.ordered and cold.ordered
    maj = majorises(cyc.hot, cyc.cold, tol) if ordered else None
    f = lw = None
    if medium == "coupled":
        try:
            eta_ub = efficiency_upper_bound(spin, B1, B2, J)
        except SingularityError:
            eta_ub = None
        if ordered:
            f = functionals(cyc.hot, cyc.cold, spin)
            lw = local_work(cyc.hot, cyc.cold, spin, B1, B2)
    else:
        eta_ub = uncoupled_efficiency(B1, B2)
        x = single_spin_work_functional(cyc.hot, cyc.cold)
        f = Functionals(x, 0.0, 0.0)
    return EngineReport(
        medium, spin.twice_s, float(B1), float(B2), float(T1), float(T2), float(J),
        cyc, maj, f, lw, uncoupled_efficiency(B1, B2), eta_ub,
    )
