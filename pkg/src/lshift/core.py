"""Hydrogenic states, energy grids, and the phi <-> E change of variables.

The dimensionless frequency variable

    phi = (1/2) ln(1 + E / |E_n|),        E = hbar*omega in eV,

compactifies the six-decade photon-energy range onto the short interval
(0, phi_c] and is the natural integration variable for the closed-form
shift integrands.  Its inverse and Jacobian live here so every module
shares one definition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .constants import PhysicalConstants, default_constants

__all__ = [
    "HydrogenState",
    "EnergyGrid",
    "binding_energy",
    "phi_of_energy",
    "energy_of_phi",
    "de_dphi",
    "phi_cutoff",
    "divergence_threshold",
    "make_grid",
]

GridScale = Literal["linear", "log"]


@dataclass(frozen=True)
class HydrogenState:
    """A hydrogenic level (n, l) with nuclear charge z."""

    n: int
    l: int
    z: int = 1

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError(f"principal quantum number n={self.n} must be >= 1")
        if not 0 <= self.l <= self.n - 1:
            raise ValueError(f"orbital quantum number l={self.l} outside 0..{self.n - 1}")
        if self.z < 1:
            raise ValueError(f"nuclear charge z={self.z} must be >= 1")

    def label(self) -> str:
        letters = "spdfghiklmnoqrtuvwxyz"
        return f"{self.n}{letters[self.l].upper()}"


@dataclass(frozen=True)
class EnergyGrid:
    """Strictly increasing photon energies in eV with a scale tag."""

    points: np.ndarray
    scale: GridScale

    def __post_init__(self) -> None:
        pts = np.asarray(self.points, dtype=float)
        object.__setattr__(self, "points", pts)
        if pts.ndim != 1 or pts.size < 2:
            raise ValueError("grid needs at least two points")
        if np.any(np.diff(pts) <= 0):
            raise ValueError("grid points must be strictly increasing")
        if pts[0] <= 0:
            raise ValueError("grid points must be positive")

    def __len__(self) -> int:
        return len(self.points)


def binding_energy(state: HydrogenState, constants: PhysicalConstants | None = None) -> float:
    """Level energy E_n = -mc^2 (Z alpha)^2 / (2 n^2) in eV (negative).

    Routed through ``constants.ground_binding`` so the |E_1| replication
    knob propagates consistently into phi and the Jacobian.
    """
    c = constants or default_constants()
    return -c.ground_binding * state.z**2 / state.n**2


def phi_of_energy(energy_ev, state: HydrogenState, constants: PhysicalConstants | None = None):
    """phi = (1/2) ln(1 + E/|E_n|).  Accepts scalar or array E >= 0."""
    e_n = abs(binding_energy(state, constants))
    energy_ev = np.asarray(energy_ev, dtype=float)
    if np.any(energy_ev < 0):
        raise ValueError("photon energy must be >= 0")
    out = 0.5 * np.log1p(energy_ev / e_n)
    return float(out) if out.ndim == 0 else out


def energy_of_phi(phi, state: HydrogenState, constants: PhysicalConstants | None = None):
    """Inverse map E = |E_n| (e^{2 phi} - 1); exact round trip with phi_of_energy."""
    e_n = abs(binding_energy(state, constants))
    phi = np.asarray(phi, dtype=float)
    out = e_n * np.expm1(2.0 * phi)
    return float(out) if out.ndim == 0 else out


def de_dphi(phi, state: HydrogenState, constants: PhysicalConstants | None = None):
    """Jacobian dE/dphi = 2 |E_n| e^{2 phi} of the change of variables."""
    e_n = abs(binding_energy(state, constants))
    phi = np.asarray(phi, dtype=float)
    out = 2.0 * e_n * np.exp(2.0 * phi)
    return float(out) if out.ndim == 0 else out


def phi_cutoff(state: HydrogenState, constants: PhysicalConstants | None = None) -> float:
    """Integration cutoff phi_c = (1/2) ln(1 + 2 n^2 / (Z alpha)^2).

    Corresponds to a photon energy of mc^2; coincides with
    ``phi_of_energy(mc2, state)`` whenever ground_binding carries its
    default mc^2 alpha^2 / 2 value.
    """
    c = constants or default_constants()
    za = state.z * c.alpha
    return 0.5 * math.log1p(2.0 * state.n**2 / za**2)


def divergence_threshold(state: HydrogenState, constants: PhysicalConstants | None = None) -> float:
    """Photon energy below which the s-representation for this level diverges.

    The semi-infinite kernel integral converges only for nu = n e^{-phi} < 1,
    i.e. for E > (n^2 - 1)|E_n|.  For n=1 the threshold is 0 (always fine);
    for n=2 it is 3|E_2| ~ 10.204 eV, the Lyman-alpha transition energy.
    """
    e_n = abs(binding_energy(state, constants))
    return (state.n**2 - 1) * e_n


def make_grid(
    e_min: float,
    e_max: float,
    count: int,
    scale: GridScale = "log",
    constants: PhysicalConstants | None = None,
) -> EnergyGrid:
    """Build a linear or logarithmic energy grid with exact endpoints."""
    c = constants or default_constants()
    if count < 2:
        raise ValueError(f"count={count} must be >= 2")
    if not 0 < e_min < e_max:
        raise ValueError(f"need 0 < e_min < e_max, got ({e_min}, {e_max})")
    if e_max > c.energy_ceiling:
        raise ValueError(f"e_max={e_max} eV exceeds the mc^2 integration ceiling")
    if scale == "linear":
        pts = np.linspace(e_min, e_max, count)
    elif scale == "log":
        pts = np.geomspace(e_min, e_max, count)
    else:
        raise ValueError(f"unknown grid scale {scale!r}")
    pts[0], pts[-1] = e_min, e_max
    return EnergyGrid(points=pts, scale=scale)
