"""Otto-cycle heat engines run on a single spin or an exchange-coupled spin pair."""
from .coupled import (
    CriticalCouplings,
    Functionals,
    LocalWorkReport,
    critical_coupling_bisect,
    critical_coupling_closed_form,
    critical_couplings,
    efficiency_and_bound,
    functionals,
    local_work,
    phi,
    reduced_distributions,
)
from .engine import analyze
from .majorize import (
    MajorisationReport,
    extreme_case_holds,
    gap_ratio_condition,
    majorises,
    single_spin_majorisation_condition,
)
from .spectra import (
    EnergySpectrum,
    SpinMagnitude,
    coupled_spectrum,
    hamiltonian_matrix,
    ordering_threshold,
    single_spin_spectrum,
)
from .thermo import (
    CycleReport,
    ThermalDistribution,
    canonical_distribution,
    heats_via_divergence,
    otto_cycle,
    relative_entropy,
    shannon_entropy,
    work_via_divergence,
)
from .verify import brute_force_cycle, diagonalize, partial_trace, thermal_density_matrix

__version__ = "0.1.0"
