"""Spectral density of the non-relativistic radiative shift of hydrogen levels.

Closed-form kernel integrands (no sum over intermediate states), adaptive
quadrature to densities, totals, and cumulative fractions, and the
classic reference models (discrete transition sums, position smearing,
refractive-index vacuum energy) for cross-validation.
"""

from .constants import CODATA, PhysicalConstants, default_constants
from .core import (
    EnergyGrid,
    HydrogenState,
    binding_energy,
    divergence_threshold,
    energy_of_phi,
    make_grid,
    phi_cutoff,
    phi_of_energy,
)
from .engine import (
    FractionCurve,
    QuadratureConfig,
    ShiftResult,
    SpectralCurve,
    density_2s2p,
    density_curve,
    fraction_curve,
    s_integral,
    spectral_density,
    total_shift,
    total_shift_continued,
)
from .kernel import (
    CoefficientSeries,
    KernelPoint,
    integrand_1s,
    integrand_2p,
    integrand_2s2p,
    integrand_general,
    kernel_point,
    m_nl,
    series_coefficients,
)
from .models import (
    ResonanceError,
    SumRuleReport,
    TransitionTerm,
    bethe_density_discrete,
    bethe_log_shift,
    fit_density,
    high_e_asymptote,
    low_e_asymptote,
    oscillator_strength_1s_np,
    power_density,
    rms_displacement,
    sum_rule_report,
    welton_density,
)
from .vacuum import VolumeSample, spectral_volume, vacuum_energy_density

__version__ = "0.1.0"

__all__ = [
    "CODATA",
    "PhysicalConstants",
    "default_constants",
    "HydrogenState",
    "EnergyGrid",
    "binding_energy",
    "phi_of_energy",
    "energy_of_phi",
    "phi_cutoff",
    "divergence_threshold",
    "make_grid",
    "KernelPoint",
    "CoefficientSeries",
    "kernel_point",
    "series_coefficients",
    "m_nl",
    "integrand_general",
    "integrand_1s",
    "integrand_2s2p",
    "integrand_2p",
    "QuadratureConfig",
    "ShiftResult",
    "SpectralCurve",
    "FractionCurve",
    "s_integral",
    "spectral_density",
    "density_2s2p",
    "density_curve",
    "total_shift",
    "total_shift_continued",
    "fraction_curve",
    "TransitionTerm",
    "SumRuleReport",
    "ResonanceError",
    "oscillator_strength_1s_np",
    "bethe_density_discrete",
    "welton_density",
    "power_density",
    "high_e_asymptote",
    "low_e_asymptote",
    "fit_density",
    "bethe_log_shift",
    "rms_displacement",
    "sum_rule_report",
    "VolumeSample",
    "vacuum_energy_density",
    "spectral_volume",
    "__version__",
]
