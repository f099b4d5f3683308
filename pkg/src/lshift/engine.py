"""Shift densities, totals, and fraction curves for hydrogenic levels.

The outer integration runs in the compact variable phi rather than over
six decades of photon energy; densities in eV/eV are recovered through
the exact Jacobian dE/dphi = 2 |E_n| e^{2 phi}.

Convergence domain.  The semi-infinite s-integral converges only for
nu = n e^{-phi} < 1, i.e. photon energies above (n^2 - 1)|E_n| (about
10.204 eV for n = 2).  Below that:

* S states switch to the analytic low-energy density
  (2 alpha / 3 pi)(Z alpha)^2 / n^2 - (alpha / pi mc^2) E at a
  configurable energy (default: the threshold itself); the mismatch at
  the seam is reported, not hidden.
* Non-S levels have a genuine intermediate-state resonance at the
  threshold (2P -> 1S at 10.204 eV).  Totals across it use the analytic
  continuation of the s-integral - the large-s tail integrates to simple
  rational functions of nu whose poles sit at the intermediate bound
  levels - and take the principal value across the resonance, which is
  exactly the real part the shift formula prescribes.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import kernel, models
from .constants import PhysicalConstants, default_constants
from .core import (
    EnergyGrid,
    HydrogenState,
    de_dphi,
    divergence_threshold,
    phi_of_energy,
)
from .quadrature import (
    QuadratureConfig,
    adaptive_integrate,
    geometric_panels,
    tanh_sinh_integrate,
)

__all__ = [
    "QuadratureConfig",
    "ShiftResult",
    "SpectralCurve",
    "FractionCurve",
    "s_integral",
    "spectral_density",
    "spectral_density_point",
    "density_2s2p",
    "density_curve",
    "total_shift",
    "total_shift_continued",
    "fraction_curve",
    "CURVE_MODELS",
]

DEFAULT_E_MIN = 5.4e-7  # eV; standard low cutoff for quoted totals

# Flags beginning with this prefix indicate a quality problem; everything
# else is informational bookkeeping.
NONCONVERGED = "nonconvergent"


@dataclass(frozen=True)
class ShiftResult:
    """Integrated shift in eV with its error estimate and bookkeeping."""

    value: float
    error_estimate: float
    integrand_evaluations: int
    flags: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.error_estimate < 0:
            raise ValueError("error_estimate must be >= 0")

    @property
    def converged(self) -> bool:
        return not any(f.startswith(NONCONVERGED) for f in self.flags)


@dataclass(frozen=True)
class SpectralCurve:
    """Ordered (E, dDeltaE/dE) samples for one model."""

    energies: np.ndarray
    values: np.ndarray
    model: str
    state: HydrogenState
    point_flags: tuple[str, ...]
    flags: tuple[str, ...] = ()
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        e = np.asarray(self.energies, dtype=float)
        v = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "values", v)
        if e.shape != v.shape or len(self.point_flags) != e.size:
            raise ValueError("curve arrays and flags must have matching length")
        if np.any(np.diff(e) <= 0):
            raise ValueError("curve energies must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve values must be finite at every sample")


@dataclass(frozen=True)
class FractionCurve:
    """Cumulative fraction of the total shift below each energy."""

    energies: np.ndarray
    fractions: np.ndarray
    state: HydrogenState
    total: float
    flags: tuple[str, ...] = ()
    integrand_evaluations: int = 0


def _b17_prefactor(state: HydrogenState, constants: PhysicalConstants) -> float:
    """Overall factor 4 mc^2 alpha (Z alpha)^4 / (3 pi n^4) of the phi-integral."""
    za = state.z * constants.alpha
    return 4.0 * constants.mc2 * constants.alpha * za**4 / (3.0 * math.pi * state.n**4)


def _run_quadrature(f, breakpoints, config: QuadratureConfig, rel_scale: float = 1.0) -> QuadratureResult:
    if config.method == "tanh-sinh":
        return tanh_sinh_integrate(
            f, breakpoints, rel_tol=config.rel_tol * rel_scale, abs_tol=config.abs_tol
        )
    return adaptive_integrate(
        f,
        breakpoints,
        rel_tol=config.rel_tol * rel_scale,
        abs_tol=config.abs_tol,
        max_subdivisions=config.max_subdivisions,
    )


def _s_breakpoints(num1: float, config: QuadratureConfig) -> list[float]:
    s_max = math.log(1.0 / config.s_truncation_epsilon) / (-num1)
    return geometric_panels(0.0, s_max, first_width=min(1.0, 0.5 * s_max))


def _s_integral_raw(phi: float, n: int, l: int, config: QuadratureConfig, l_at_most: int | None = None):
    """(value, error, evaluations, flags) of the inner s-integral at fixed phi."""
    num1 = kernel.nu_minus_one(phi, n)
    if num1 >= -1e-12:
        return (
            math.nan,
            math.inf,
            0,
            (f"{NONCONVERGED}:s-representation diverges for nu>=1 (phi={phi:.6g}, n={n})",),
        )
    f = kernel.make_integrand(phi, n, l, l_at_most)
    res = _run_quadrature(f, _s_breakpoints(num1, config), config)
    flags = () if res.converged else (f"{NONCONVERGED}:s-integral at phi={phi:.6g}",)
    return res.value, res.error, res.evaluations, flags


def _s_integral_continued(
    phi: float,
    n: int,
    l: int,
    config: QuadratureConfig,
    l_at_most: int | None = None,
    tail_order: int = 6,
):
    """Analytic continuation of the s-integral, valid for 0 < nu < 2, nu != 1.

    Splits the integrand into its large-s tail, which integrates termwise
    to -a_j / (1 + j - nu), plus a remainder that decays like
    e^{(nu - 1 - J) s} and is integrated numerically.  Above threshold
    (nu < 1) this agrees with the plain route to quadrature accuracy.
    """
    num1 = kernel.nu_minus_one(phi, n)
    if num1 >= 1.0 - 1e-12:
        return math.nan, math.inf, 0, (f"{NONCONVERGED}:nu>=2 at phi={phi:.6g}",)
    if abs(num1) < 1e-12:
        return math.nan, math.inf, 0, (f"{NONCONVERGED}:on-resonance at phi={phi:.6g}",)
    p_coeffs = kernel.bracket_taylor(phi, n, l, tail_order + 1, l_at_most)
    a = [(j + 1) * p_coeffs[j + 1] for j in range(tail_order)]
    pole_part = -math.fsum(a[j] / (j - num1) for j in range(tail_order))
    g = kernel.make_bracket_derivative(phi, n, l, l_at_most)

    def remainder(s):
        s = np.asarray(s, dtype=float)
        eps = np.exp(-s)
        tail = np.zeros_like(s)
        for coeff in reversed(a):
            tail = tail * eps + coeff
        return -np.exp(num1 * s) * (g(s) - tail)

    s_max = math.log(1.0 / config.s_truncation_epsilon) / (tail_order - num1)
    # The remainder only needs accuracy relative to the full integral, whose
    # scale the pole part sets; near threshold the remainder itself is a
    # cancellation-noise-level residue that no relative criterion can meet.
    remainder_abs_tol = max(config.abs_tol, 0.5 * config.rel_tol * abs(pole_part))
    res = adaptive_integrate(
        remainder,
        geometric_panels(0.0, s_max, first_width=min(1.0, 0.5 * s_max)),
        rel_tol=config.rel_tol,
        abs_tol=remainder_abs_tol,
        max_subdivisions=config.max_subdivisions,
    )
    flags = () if res.converged else (f"{NONCONVERGED}:continued s-integral at phi={phi:.6g}",)
    return pole_part + res.value, res.error, res.evaluations, flags


def s_integral(
    phi: float,
    state: HydrogenState,
    config: QuadratureConfig | None = None,
    constants: PhysicalConstants | None = None,
) -> ShiftResult:
    """Inner integral int_0^inf ds of the level integrand at fixed phi.

    Returns a flagged (nan) result rather than a silent value when the
    representation diverges (nu >= 1, i.e. E below the level threshold).
    """
    config = config or QuadratureConfig()
    if phi <= 0:
        raise ValueError(f"phi={phi} must be > 0")
    value, error, evals, flags = _s_integral_raw(phi, state.n, state.l, config)
    return ShiftResult(value, error, evals, flags)


def _switch_energy(state: HydrogenState, config: QuadratureConfig, constants: PhysicalConstants) -> float:
    if config.switch_energy_ev is not None:
        return config.switch_energy_ev
    return divergence_threshold(state, constants)


def _gt_density_at(
    energy_ev: float,
    n: int,
    l: int,
    z: int,
    config: QuadratureConfig,
    constants: PhysicalConstants,
    l_at_most: int | None = None,
):
    state = HydrogenState(n=n, l=l, z=z)
    phi = phi_of_energy(energy_ev, state, constants)
    value, error, evals, flags = _s_integral_raw(phi, n, l, config, l_at_most)
    pref = _b17_prefactor(state, constants)
    jac = de_dphi(phi, state, constants)
    scale = pref * math.exp(phi) * math.sinh(phi) / jac
    return scale * value, scale * error, evals, flags


def spectral_density_point(
    energy_ev: float,
    state: HydrogenState,
    config: QuadratureConfig | None = None,
    constants: PhysicalConstants | None = None,
):
    """(density, flag, evaluations) at one photon energy.

    S states below the configured switch energy use the analytic
    low-energy density and are flagged "analytic-low-energy".
    """
    config = config or QuadratureConfig()
    constants = constants or default_constants()
    _validate_energy(energy_ev, constants)
    threshold = divergence_threshold(state, constants)
    if state.n >= 2 and energy_ev <= threshold * (1.0 + 1e-12):
        if state.l == 0 and energy_ev < _switch_energy(state, config, constants):
            return (
                models.low_e_asymptote(energy_ev, state, constants),
                "analytic-low-energy",
                0,
            )
        if state.l == 0:
            pass  # switch set below threshold: fall through and let the flags speak
        else:
            raise ValueError(
                f"gt density for {state.label()} is undefined at E={energy_ev} eV "
                f"(below the {threshold:.4f} eV intermediate-state resonance)"
            )
    elif state.n >= 2 and state.l == 0 and energy_ev < _switch_energy(state, config, constants):
        return (
            models.low_e_asymptote(energy_ev, state, constants),
            "analytic-low-energy",
            0,
        )
    value, _, evals, flags = _gt_density_at(energy_ev, state.n, state.l, state.z, config, constants)
    return value, (flags[0] if flags else ""), evals


def spectral_density(
    energy_ev: float,
    state: HydrogenState,
    config: QuadratureConfig | None = None,
    constants: PhysicalConstants | None = None,
) -> float:
    """Shift spectral density dDeltaE/dE (eV/eV) at one photon energy."""
    value, flag, _ = spectral_density_point(energy_ev, state, config, constants)
    if flag.startswith(NONCONVERGED):
        raise ValueError(f"density did not converge at E={energy_ev} eV: {flag}")
    return value


def density_2s2p(
    energy_ev: float,
    z: int = 1,
    config: QuadratureConfig | None = None,
    constants: PhysicalConstants | None = None,
) -> float:
    """Spectral density of the classic 2S-2P splitting (single combined kernel).

    Only defined above the 2P -> 1S resonance energy; equals
    density(2S) - density(2P) there.
    """
    config = config or QuadratureConfig()
    constants = constants or default_constants()
    _validate_energy(energy_ev, constants)
    state = HydrogenState(2, 0, z)
    threshold = divergence_threshold(state, constants)
    if energy_ev <= threshold * (1.0 + 1e-12):
        raise ValueError(
            f"2S-2P density is undefined at E={energy_ev} eV (below {threshold:.4f} eV)"
        )
    value, _, _, flags = _gt_density_at(energy_ev, 2, 0, z, config, constants, l_at_most=1)
    if flags:
        raise ValueError(f"2S-2P density did not converge at E={energy_ev} eV")
    return value


def _phi_breakpoints(phi_a: float, phi_b: float) -> list[float]:
    first = min(max(phi_a, 1e-9), 0.25 * (phi_b - phi_a))
    return geometric_panels(phi_a, phi_b, first_width=first)


def _outer_integral(phi_a: float, phi_b: float, config: QuadratureConfig, inner):
    """Prefactor-free integral of e^phi sinh(phi) S(phi) over [phi_a, phi_b].

    ``inner`` maps phi -> (value, error, evaluations, flags); inner errors
    are folded into the reported estimate via the worst relative error.
    """
    bookkeeping = {"evals": 0, "flags": [], "inner_rel": 0.0}

    def h(phis):
        phis = np.atleast_1d(np.asarray(phis, dtype=float))
        out = np.empty_like(phis)
        for i, p in enumerate(phis):
            val, err, ev, fl = inner(p)
            bookkeeping["evals"] += ev
            bookkeeping["flags"].extend(fl)
            if np.isfinite(val) and val != 0.0 and np.isfinite(err):
                bookkeeping["inner_rel"] = max(bookkeeping["inner_rel"], abs(err / val))
            out[i] = math.exp(p) * math.sinh(p) * val
        return out

    res = _run_quadrature(h, _phi_breakpoints(phi_a, phi_b), config)
    if not res.converged:
        bookkeeping["flags"].append(f"{NONCONVERGED}:outer phi-integral [{phi_a:.4g},{phi_b:.4g}]")
    error = res.error + bookkeeping["inner_rel"] * abs(res.value)
    flags = list(dict.fromkeys(bookkeeping["flags"]))
    if len(flags) > 4:
        flags = flags[:4] + [f"...and {len(flags) - 4} similar flags"]
    return res.value, error, bookkeeping["evals"] + res.evaluations, tuple(flags)


def total_shift(
    state: HydrogenState,
    e_min: float = DEFAULT_E_MIN,
    e_max: float | None = None,
    config: QuadratureConfig | None = None,
    constants: PhysicalConstants | None = None,
) -> ShiftResult:
    """Integrated level shift over [e_min, e_max] in eV.

    Dispatch by level:
    * n = 1, or windows entirely above the level threshold: plain route.
    * S states with e_min below the switch energy: analytic low-energy
      density integrated in closed form up to the switch, flagged, with
      the seam mismatch recorded; plain route above.
    * non-S levels with e_min below threshold: principal value across the
      intermediate-state resonance via the analytic continuation.
    """
    config = config or QuadratureConfig()
    constants = constants or default_constants()
    e_max = constants.mc2 if e_max is None else e_max
    _validate_window(e_min, e_max, constants)
    threshold = divergence_threshold(state, constants)
    pref = _b17_prefactor(state, constants)

    if state.n == 1 or e_min > threshold:
        phi_a = phi_of_energy(e_min, state, constants)
        phi_b = phi_of_energy(e_max, state, constants)
        inner = lambda p: _s_integral_raw(p, state.n, state.l, config)
        value, error, evals, flags = _outer_integral(phi_a, phi_b, config, inner)
        return ShiftResult(pref * value, pref * error, evals, flags)

    if state.l == 0:
        return _total_s_state_with_switch(state, e_min, e_max, config, constants)

    result = total_shift_continued(state, e_min, e_max, config, constants)
    return result


def _low_e_antiderivative(e: float, state: HydrogenState, constants: PhysicalConstants) -> float:
    c0 = models.low_e_asymptote(0.0, state, constants)
    slope = constants.alpha / (math.pi * constants.mc2)
    return c0 * e - 0.5 * slope * e * e


def _total_s_state_with_switch(state, e_min, e_max, config, constants) -> ShiftResult:
    switch = _switch_energy(state, config, constants)
    flags: list[str] = []
    value = 0.0
    error = 0.0
    evals = 0
    seam = min(switch, e_max)
    if e_min < seam:
        value += _low_e_antiderivative(seam, state, constants) - _low_e_antiderivative(e_min, state, constants)
        flags.append(f"analytic-low-energy:E<{seam:.6g}")
    gt_start = max(seam, e_min)
    if e_max > gt_start:
        phi_a = phi_of_energy(gt_start, state, constants)
        phi_b = phi_of_energy(e_max, state, constants)
        pref = _b17_prefactor(state, constants)
        inner = lambda p: _s_integral_raw(p, state.n, state.l, config)
        v, err, ev, fl = _outer_integral(phi_a, phi_b, config, inner)
        value += pref * v
        error += pref * err
        evals += ev
        flags.extend(fl)
        # Seam continuity: compare the analytic density against the first
        # gt-computable point just above the switch.
        probe = seam * (1.0 + 1e-3)
        if e_min < seam and probe < e_max:
            gt_val, _, ev2, fl2 = _gt_density_at(probe, state.n, state.l, state.z, config, constants)
            evals += ev2
            if not fl2 and gt_val != 0.0:
                mismatch = models.low_e_asymptote(seam, state, constants) / gt_val - 1.0
                flags.append(f"seam-mismatch-rel={mismatch:.6g}")
    return ShiftResult(value, error, evals, tuple(flags))


def total_shift_continued(
    state: HydrogenState,
    e_min: float = DEFAULT_E_MIN,
    e_max: float | None = None,
    config: QuadratureConfig | None = None,
    constants: PhysicalConstants | None = None,
    l_at_most: int | None = None,
) -> ShiftResult:
    """Level shift via the analytically continued inner integral.

    Takes the principal value across the nu = 1 resonance when the window
    spans it (always flagged).  For windows entirely above threshold this
    reproduces ``total_shift``; for S states it provides the continuation
    alternative to the analytic-switch treatment (the 2S residue at the
    resonance vanishes, so no pole is actually present there).
    """
    config = config or QuadratureConfig()
    constants = constants or default_constants()
    e_max = constants.mc2 if e_max is None else e_max
    _validate_window(e_min, e_max, constants)
    pref = _b17_prefactor(state, constants)
    phi_a = phi_of_energy(e_min, state, constants)
    phi_b = phi_of_energy(e_max, state, constants)
    phi_star = math.log(state.n)  # nu = 1
    inner = lambda p: _s_integral_continued(p, state.n, state.l, config, l_at_most)

    if not phi_a < phi_star < phi_b:
        value, error, evals, flags = _outer_integral(phi_a, phi_b, config, inner)
        return ShiftResult(pref * value, pref * error, evals, flags)

    width = min(0.05, 0.5 * (phi_star - phi_a), 0.5 * (phi_b - phi_star))
    flags: list[str] = [f"principal-value:resonance at E={divergence_threshold(state, constants):.6g} eV"]
    evals = 0
    value = 0.0
    error = 0.0
    for a, b in ((phi_a, phi_star - width), (phi_star + width, phi_b)):
        v, err, ev, fl = _outer_integral(a, b, config, inner)
        value += v
        error += err
        evals += ev
        flags.extend(fl)

    core_evals = {"n": 0}

    def core(ts):
        ts = np.atleast_1d(np.asarray(ts, dtype=float))
        out = np.empty_like(ts)
        for i, t in enumerate(ts):
            acc = 0.0
            for p in (phi_star + t, phi_star - t):
                val, _, ev, _ = inner(p)
                core_evals["n"] += ev
                acc += math.exp(p) * math.sinh(p) * val
            out[i] = acc
        return out

    t0 = 1e-7
    res = _run_quadrature(core, geometric_panels(t0, width, first_width=t0), config)
    evals += res.evaluations + core_evals["n"]
    if not res.converged:
        flags.append(f"{NONCONVERGED}:principal-value core")
    # the untouched (0, t0) sliver: the symmetric sum is finite there
    sliver = abs(core(np.array([t0]))[0]) * t0
    value += res.value
    error += res.error + sliver
    return ShiftResult(pref * value, pref * error, evals, tuple(dict.fromkeys(flags)))


def fraction_curve(
    state: HydrogenState,
    grid: EnergyGrid,
    config: QuadratureConfig | None = None,
    constants: PhysicalConstants | None = None,
    e_min: float = DEFAULT_E_MIN,
) -> FractionCurve:
    """Cumulative fraction F(E) of the total shift from energies below E.

    F is normalized by the shift over [e_min, mc^2], so F(mc^2) = 1 by
    construction and the curve is monotone nondecreasing for levels with
    positive density.
    """
    config = config or QuadratureConfig()
    constants = constants or default_constants()
    energies = np.asarray(grid.points, dtype=float)
    if energies[0] <= e_min:
        raise ValueError(f"grid must start above the low cutoff {e_min} eV")
    flags: list[str] = []
    evals = 0
    boundaries = [e_min, *energies.tolist()]
    partials = []
    for a, b in zip(boundaries[:-1], boundaries[1:]):
        piece = total_shift(state, a, b, config, constants)
        partials.append(piece.value)
        flags.extend(piece.flags)
        evals += piece.integrand_evaluations
    cumulative = np.cumsum(partials)
    total = cumulative[-1]
    if energies[-1] < constants.mc2:
        tail = total_shift(state, energies[-1], constants.mc2, config, constants)
        total += tail.value
        flags.extend(tail.flags)
        evals += tail.integrand_evaluations
    fractions = cumulative / total
    return FractionCurve(
        energies=energies,
        fractions=fractions,
        state=state,
        total=total,
        flags=tuple(dict.fromkeys(flags)),
        integrand_evaluations=evals,
    )


CURVE_MODELS = ("gt", "gt-2s2p", "bethe", "welton", "power", "fit", "asymptote")


def density_curve(
    grid: EnergyGrid,
    state: HydrogenState,
    model: str = "gt",
    config: QuadratureConfig | None = None,
    constants: PhysicalConstants | None = None,
    n_max: int = 20,
    resonance_exclusion_ev: float = 0.01,
    workers: int = 1,
) -> SpectralCurve:
    """Evaluate the selected model's density on the grid, point by point.

    Points are independent pure computations; with ``workers`` > 1 they
    are evaluated concurrently and reassembled in grid order, so parallel
    and serial runs produce identical curves.
    """
    config = config or QuadratureConfig()
    constants = constants or default_constants()
    if model not in CURVE_MODELS:
        raise ValueError(f"unknown model {model!r}; expected one of {CURVE_MODELS}")
    threshold = divergence_threshold(state, constants)
    if model == "gt" and state.n >= 2 and state.l > 0 and grid.points[0] <= threshold:
        raise ValueError(
            f"gt curve for {state.label()} requires grid energies above {threshold:.4f} eV"
        )
    if model == "gt-2s2p" and grid.points[0] <= divergence_threshold(HydrogenState(2, 0, state.z), constants):
        raise ValueError("gt-2s2p curve requires grid energies above the resonance")

    def at(energy: float):
        if model == "gt":
            value, flag, _ = spectral_density_point(energy, state, config, constants)
            return value, flag
        if model == "gt-2s2p":
            return density_2s2p(energy, state.z, config, constants), ""
        if model == "bethe":
            return models.bethe_density_discrete(energy, state, n_max, constants), ""
        if model == "welton":
            return models.welton_density(energy, state.n, state.z, constants), ""
        if model == "power":
            return (
                models.power_density(energy, state, n_max, resonance_exclusion_ev, constants),
                "",
            )
        if model == "fit":
            return models.fit_density(energy, state), ""
        return models.high_e_asymptote(energy, state, constants), ""

    points = [float(e) for e in grid.points]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(at, points))
    else:
        results = [at(e) for e in points]
    values = np.array([r[0] for r in results])
    point_flags = tuple(r[1] for r in results)
    metadata = {
        "model": model,
        "state": state.label(),
        "z": state.z,
        "rel_tol": config.rel_tol,
        "abs_tol": config.abs_tol,
        "switch_energy_ev": _switch_energy(state, config, constants) if state.l == 0 else None,
        "n_max": n_max if model in ("bethe", "power") else None,
    }
    return SpectralCurve(
        energies=grid.points,
        values=values,
        model=model,
        state=state,
        point_flags=point_flags,
        metadata=metadata,
    )


def _validate_energy(energy_ev: float, constants: PhysicalConstants) -> None:
    if not 0.0 < energy_ev <= constants.energy_ceiling:
        raise ValueError(
            f"photon energy {energy_ev} eV outside (0, {constants.energy_ceiling:.6g}]"
        )


def _validate_window(e_min: float, e_max: float, constants: PhysicalConstants) -> None:
    if not 0.0 < e_min < e_max:
        raise ValueError(f"need 0 < e_min < e_max, got ({e_min}, {e_max})")
    if e_max > constants.energy_ceiling:
        raise ValueError(f"e_max={e_max} eV exceeds the mc^2 ceiling")
