import math

import numpy as np
import pytest

from lshift import (
    HydrogenState,
    binding_energy,
    divergence_threshold,
    energy_of_phi,
    make_grid,
    phi_cutoff,
    phi_of_energy,
)
from lshift.constants import PhysicalConstants
from lshift.core import de_dphi


def test_binding_energy_ground(constants):
    # -mc^2 alpha^2 / 2 evaluated independently
    expected = -constants.mc2 * constants.alpha**2 / 2.0
    assert binding_energy(HydrogenState(1, 0)) == pytest.approx(expected, rel=1e-12)
    assert binding_energy(HydrogenState(1, 0)) == pytest.approx(-13.6057, rel=1e-4)


def test_binding_energy_scalings():
    e1 = binding_energy(HydrogenState(1, 0))
    assert binding_energy(HydrogenState(2, 0)) == pytest.approx(e1 / 4.0, rel=1e-14)
    assert binding_energy(HydrogenState(2, 1)) == pytest.approx(e1 / 4.0, rel=1e-14)
    assert binding_energy(HydrogenState(1, 0, z=2)) == pytest.approx(4.0 * e1, rel=1e-14)


def test_state_validation():
    with pytest.raises(ValueError):
        HydrogenState(0, 0)
    with pytest.raises(ValueError):
        HydrogenState(2, 2)
    with pytest.raises(ValueError):
        HydrogenState(1, 0, z=0)
    assert HydrogenState(3, 2).label() == "3D"


def test_phi_basics(ground):
    assert phi_of_energy(0.0, ground) == 0.0
    e1 = abs(binding_energy(ground))
    assert phi_of_energy(e1, ground) == pytest.approx(0.5 * math.log(2.0), rel=1e-14)
    with pytest.raises(ValueError):
        phi_of_energy(-1.0, ground)


def test_phi_round_trip(ground, constants):
    energies = np.geomspace(1e-7, constants.mc2, 200)
    phi = phi_of_energy(energies, ground)
    back = energy_of_phi(phi, ground)
    assert np.max(np.abs(back - energies) / energies) < 1e-12


def test_phi_cutoff_values(constants):
    # direct evaluation of (1/2) ln(1 + 2 n^2/(Z alpha)^2)
    for n, expected in [(1, 5.267), (2, 5.960)]:
        state = HydrogenState(n, 0)
        direct = 0.5 * math.log(1.0 + 2.0 * n**2 / (constants.alpha**2))
        assert phi_cutoff(state) == pytest.approx(direct, rel=1e-14)
        assert phi_cutoff(state) == pytest.approx(expected, abs=2e-3)
    assert phi_cutoff(HydrogenState(1, 0)) == pytest.approx(
        phi_of_energy(constants.mc2, HydrogenState(1, 0)), rel=1e-12
    )


def test_phi_cutoff_monotone_in_z():
    cuts = [phi_cutoff(HydrogenState(1, 0, z=z)) for z in (1, 2, 5, 20, 90)]
    assert all(a > b > 0 for a, b in zip(cuts, cuts[1:]))


def test_jacobian_matches_finite_difference(ground):
    h = 1e-6
    for phi in (1e-4, 0.1, 1.0, 4.0):
        fd = (energy_of_phi(phi + h, ground) - energy_of_phi(phi - h, ground)) / (2 * h)
        assert de_dphi(phi, ground) == pytest.approx(fd, rel=1e-8)


def test_divergence_threshold(s2s, constants):
    assert divergence_threshold(s2s) == pytest.approx(3 * abs(binding_energy(s2s)), rel=1e-14)
    assert divergence_threshold(s2s) == pytest.approx(10.204, abs=1e-3)
    assert divergence_threshold(HydrogenState(1, 0)) == 0.0


def test_make_grid():
    lin = make_grid(1.0, 100.0, 3, "linear")
    assert np.allclose(lin.points, [1.0, 50.5, 100.0])
    log = make_grid(1.0, 100.0, 3, "log")
    assert np.allclose(log.points, [1.0, 10.0, 100.0])
    assert log.points[0] == 1.0 and log.points[-1] == 100.0


def test_make_grid_errors():
    with pytest.raises(ValueError):
        make_grid(0.0, 100.0, 3, "log")
    with pytest.raises(ValueError):
        make_grid(10.0, 1.0, 3, "log")
    with pytest.raises(ValueError):
        make_grid(1.0, 100.0, 1, "log")
    with pytest.raises(ValueError):
        make_grid(1.0, 1e9, 10, "log")


def test_constants_validation():
    with pytest.raises(ValueError):
        PhysicalConstants(alpha=0.008)
    with pytest.raises(ValueError):
        PhysicalConstants(ground_binding=14.0)
    knobbed = PhysicalConstants().with_ground_binding(13.6)
    assert knobbed.ground_binding == 13.6
    assert binding_energy(HydrogenState(1, 0), knobbed) == pytest.approx(-13.6)
