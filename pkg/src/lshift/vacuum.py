"""Free-field vacuum energy density and the effective spectral volume.

The zero-point field carries a spectral energy density
rho0(E) = E^3 / (2 pi^2 (hbar c)^3) per unit volume and photon energy.
Dividing the shift's spectral density by rho0 gives the volume of free
vacuum whose energy at E matches the shift's contribution at E; the
radius of the equivalent sphere sets a physical length scale for how far
the atom's influence on the vacuum reaches at each frequency.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import PhysicalConstants, default_constants
from .core import HydrogenState
from .engine import QuadratureConfig, spectral_density_point

__all__ = ["VolumeSample", "vacuum_energy_density", "spectral_volume"]


@dataclass(frozen=True)
class VolumeSample:
    """Spectral volume (Angstrom^3) and equivalent sphere radius (Angstrom)."""

    energy: float
    volume: float
    radius: float
    flag: str = ""

    def __post_init__(self) -> None:
        if self.volume <= 0:
            raise ValueError("spectral volume must be > 0")
        expected = (3.0 * self.volume / (4.0 * math.pi)) ** (1.0 / 3.0)
        if abs(self.radius - expected) > 1e-9 * expected:
            raise ValueError("radius inconsistent with volume")


def vacuum_energy_density(energy_ev: float, constants: PhysicalConstants | None = None) -> float:
    """rho0(E) = E^3 / (2 pi^2 (hbar c)^3) in eV per (eV Angstrom^3).

    Pure cubic law; rho0(1 eV) ~ 6.59e-12 / Angstrom^3.
    """
    constants = constants or default_constants()
    if energy_ev <= 0:
        raise ValueError("photon energy must be > 0")
    return energy_ev**3 / (2.0 * math.pi**2 * constants.hbar_c**3)


def spectral_volume(
    energy_ev: float,
    state: HydrogenState,
    config: QuadratureConfig | None = None,
    constants: PhysicalConstants | None = None,
) -> VolumeSample:
    """V(E) = (shift spectral density at E) / rho0(E), with sphere radius."""
    constants = constants or default_constants()
    density, flag, _ = spectral_density_point(energy_ev, state, config, constants)
    volume = density / vacuum_energy_density(energy_ev, constants)
    radius = (3.0 * volume / (4.0 * math.pi)) ** (1.0 / 3.0)
    return VolumeSample(energy=energy_ev, volume=volume, radius=radius, flag=flag)
