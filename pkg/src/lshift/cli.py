"""Command-line interface: plot-ready CSV/JSON for every quantity.

Subcommands
    density    spectral density of one model on an energy grid
    total      integrated shift over an energy window
    fraction   cumulative fraction of the total shift below E
    compare    several models evaluated at one energy
    volume     vacuum spectral volume and equivalent sphere radius
    fit-check  rational-fit deviation from the computed density

Exit codes: 0 success, 2 usage error, 3 when any non-convergence flag was
raised and --allow-flags was not given.  Tolerances can be overridden via
LSHIFT_* environment variables.
"""

from __future__ import annotations

import sys

import click

from . import __version__
from .constants import default_constants
from .core import HydrogenState, make_grid
from .engine import (
    CURVE_MODELS,
    NONCONVERGED,
    QuadratureConfig,
    density_curve,
    fraction_curve,
    spectral_density_point,
    total_shift,
)
from .models import fit_density
from .output import write_csv, write_json
from .vacuum import spectral_volume

_CONTEXT = {"help_option_names": ["-h", "--help"]}


def _state_options(f):
    f = click.option(
        "--state",
        nargs=2,
        type=int,
        default=(1, 0),
        show_default=True,
        metavar="N L",
        help="Principal and orbital quantum numbers.",
    )(f)
    f = click.option("--z", type=int, default=1, show_default=True, help="Nuclear charge.")(f)
    return f


def _quad_options(f):
    f = click.option("--rel-tol", type=float, default=1e-9, show_default=True, envvar="LSHIFT_REL_TOL")(f)
    f = click.option("--abs-tol", type=float, default=1e-14, show_default=True, envvar="LSHIFT_ABS_TOL")(f)
    f = click.option(
        "--max-subdivisions", type=int, default=512, show_default=True, envvar="LSHIFT_MAX_SUBDIVISIONS"
    )(f)
    f = click.option(
        "--s-truncation-epsilon",
        type=float,
        default=1e-16,
        show_default=True,
        envvar="LSHIFT_S_TRUNCATION_EPSILON",
    )(f)
    f = click.option(
        "--method",
        type=click.Choice(["gauss-kronrod", "tanh-sinh"]),
        default="gauss-kronrod",
        show_default=True,
        envvar="LSHIFT_METHOD",
    )(f)
    f = click.option(
        "--switch-energy",
        type=float,
        default=None,
        envvar="LSHIFT_SWITCH_ENERGY_EV",
        help="Analytic low-energy switch for n>=2 S states [default: level threshold].",
    )(f)
    return f


def _output_options(f):
    f = click.option("--out", default="-", show_default=True, help="Output path, '-' for stdout.")(f)
    f = click.option(
        "--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True
    )(f)
    f = click.option("--allow-flags", is_flag=True, help="Exit 0 even when results carry flags.")(f)
    return f


def _grid_option(f):
    return click.option(
        "--grid",
        nargs=4,
        type=click.Tuple([click.Choice(["linear", "log"]), float, float, int]),
        default=("log", 1e-5, 510998.95, 200),
        show_default=True,
        metavar="SCALE MIN MAX COUNT",
    )(f)


def _config(rel_tol, abs_tol, max_subdivisions, s_truncation_epsilon, method, switch_energy):
    return QuadratureConfig(
        rel_tol=rel_tol,
        abs_tol=abs_tol,
        max_subdivisions=max_subdivisions,
        s_truncation_epsilon=s_truncation_epsilon,
        method=method,
        switch_energy_ev=switch_energy,
    )


def _metadata(config: QuadratureConfig) -> dict:
    c = default_constants()
    return {
        "constants": {
            "alpha": c.alpha,
            "mc2_eV": c.mc2,
            "ground_binding_eV": c.ground_binding,
            "hbar_c_eV_A": c.hbar_c,
        },
        "quadrature": {
            "rel_tol": config.rel_tol,
            "abs_tol": config.abs_tol,
            "max_subdivisions": config.max_subdivisions,
            "s_truncation_epsilon": config.s_truncation_epsilon,
            "method": config.method,
            "switch_energy_ev": config.switch_energy_ev,
        },
        "version": __version__,
    }


def _finish(flags, allow_flags: bool) -> None:
    bad = [f for f in flags if f.startswith(NONCONVERGED)]
    if bad and not allow_flags:
        click.echo(f"non-convergence flags raised: {'; '.join(bad)}", err=True)
        sys.exit(3)


@click.group(context_settings=_CONTEXT)
@click.version_option(__version__)
def main() -> None:
    """Radiative-shift spectral densities for hydrogenic states."""


@main.command()
@_state_options
@_grid_option
@click.option("--model", type=click.Choice(CURVE_MODELS), default="gt", show_default=True)
@click.option("--n-max", type=int, default=20, show_default=True, help="Bound-state cut for discrete sums.")
@click.option("--exclusion", type=float, default=0.01, show_default=True, help="Resonance exclusion (eV).")
@click.option("--workers", type=int, default=1, show_default=True)
@_quad_options
@_output_options
def density(state, z, grid, model, n_max, exclusion, workers, out, fmt, allow_flags, **quad):
    """Spectral density dDeltaE/dE on an energy grid."""
    config = _config(**quad)
    hstate = HydrogenState(state[0], state[1], z)
    scale, e_min, e_max, count = grid
    curve = density_curve(
        make_grid(e_min, e_max, count, scale),
        hstate,
        model,
        config,
        n_max=n_max,
        resonance_exclusion_ev=exclusion,
        workers=workers,
    )
    rows = [
        [float(e), float(v), model, flag]
        for e, v, flag in zip(curve.energies, curve.values, curve.point_flags)
    ]
    if fmt == "csv":
        write_csv(["E_eV", "density", "model", "flag"], rows, out)
    else:
        write_json(
            {
                "command": "density",
                "state": hstate.label(),
                "model": model,
                "metadata": {**_metadata(config), "model_params": curve.metadata},
                "samples": [
                    {"E_eV": r[0], "density": r[1], "flag": r[3]} for r in rows
                ],
            },
            out,
        )
    _finish(curve.point_flags, allow_flags)


@main.command()
@_state_options
@click.option("--emin", type=float, default=5.4e-7, show_default=True)
@click.option("--emax", type=float, default=None, help="Defaults to mc^2.")
@_quad_options
@_output_options
def total(state, z, emin, emax, out, fmt, allow_flags, **quad):
    """Integrated shift over [emin, emax] in eV."""
    config = _config(**quad)
    hstate = HydrogenState(state[0], state[1], z)
    result = total_shift(hstate, emin, emax, config)
    if fmt == "csv":
        write_csv(
            ["value_eV", "error_eV", "evaluations", "flag"],
            [[result.value, result.error_estimate, result.integrand_evaluations, ";".join(result.flags)]],
            out,
        )
    else:
        write_json(
            {
                "command": "total",
                "state": hstate.label(),
                "window_eV": [emin, emax if emax is not None else default_constants().mc2],
                "metadata": _metadata(config),
                "result": {
                    "value_eV": result.value,
                    "error_eV": result.error_estimate,
                    "evaluations": result.integrand_evaluations,
                    "flags": list(result.flags),
                },
            },
            out,
        )
    _finish(result.flags, allow_flags)


@main.command()
@_state_options
@_grid_option
@click.option("--emin", type=float, default=5.4e-7, show_default=True, help="Low cutoff (eV).")
@_quad_options
@_output_options
def fraction(state, z, grid, emin, out, fmt, allow_flags, **quad):
    """Cumulative fraction of the total shift below each grid energy."""
    config = _config(**quad)
    hstate = HydrogenState(state[0], state[1], z)
    scale, e_min, e_max, count = grid
    curve = fraction_curve(hstate, make_grid(e_min, e_max, count, scale), config, e_min=emin)
    rows = [[float(e), float(f), "gt", ""] for e, f in zip(curve.energies, curve.fractions)]
    if fmt == "csv":
        write_csv(["E_eV", "fraction", "model", "flag"], rows, out)
    else:
        write_json(
            {
                "command": "fraction",
                "state": hstate.label(),
                "total_eV": curve.total,
                "low_cutoff_eV": emin,
                "metadata": _metadata(config),
                "samples": [{"E_eV": r[0], "fraction": r[1]} for r in rows],
                "flags": list(curve.flags),
            },
            out,
        )
    _finish(curve.flags, allow_flags)


@main.command()
@_state_options
@click.option("--models", default="gt,welton,fit", show_default=True, help="Comma-separated model list.")
@click.option("--at", "at_ev", type=float, required=True, help="Photon energy (eV).")
@click.option("--n-max", type=int, default=20, show_default=True)
@_quad_options
@_output_options
def compare(state, z, models, at_ev, n_max, out, fmt, allow_flags, **quad):
    """Evaluate several models' densities at one energy."""
    from . import models as refmodels

    config = _config(**quad)
    hstate = HydrogenState(state[0], state[1], z)
    rows = []
    flags: list[str] = []
    for name in models.split(","):
        name = name.strip()
        if name == "gt":
            value, flag, _ = spectral_density_point(at_ev, hstate, config)
        elif name == "bethe":
            value, flag = refmodels.bethe_density_discrete(at_ev, hstate, n_max), ""
        elif name == "welton":
            value, flag = refmodels.welton_density(at_ev, hstate.n, hstate.z), ""
        elif name == "power":
            value, flag = refmodels.power_density(at_ev, hstate, n_max), ""
        elif name == "fit":
            value, flag = fit_density(at_ev, hstate), ""
        elif name == "asymptote":
            value, flag = refmodels.high_e_asymptote(at_ev, hstate), ""
        else:
            raise click.UsageError(f"unknown model {name!r}")
        rows.append([at_ev, value, name, flag])
        if flag:
            flags.append(flag)
    if fmt == "csv":
        write_csv(["E_eV", "density", "model", "flag"], rows, out)
    else:
        write_json(
            {
                "command": "compare",
                "state": hstate.label(),
                "E_eV": at_ev,
                "metadata": _metadata(config),
                "samples": [{"model": r[2], "density": r[1], "flag": r[3]} for r in rows],
            },
            out,
        )
    _finish(flags, allow_flags)


@main.command()
@_state_options
@_grid_option
@_quad_options
@_output_options
def volume(state, z, grid, out, fmt, allow_flags, **quad):
    """Vacuum spectral volume V(E) and equivalent sphere radius."""
    config = _config(**quad)
    hstate = HydrogenState(state[0], state[1], z)
    scale, e_min, e_max, count = grid
    samples = [
        spectral_volume(float(e), hstate, config)
        for e in make_grid(e_min, e_max, count, scale).points
    ]
    rows = [[s.energy, s.volume, s.radius, "gt", s.flag] for s in samples]
    if fmt == "csv":
        write_csv(["E_eV", "volume_A3", "radius_A", "model", "flag"], rows, out)
    else:
        write_json(
            {
                "command": "volume",
                "state": hstate.label(),
                "metadata": _metadata(config),
                "samples": [
                    {"E_eV": r[0], "volume_A3": r[1], "radius_A": r[2], "flag": r[4]} for r in rows
                ],
            },
            out,
        )
    _finish([s.flag for s in samples if s.flag], allow_flags)


@main.command(name="fit-check")
@click.option(
    "--grid",
    nargs=4,
    type=click.Tuple([click.Choice(["linear", "log"]), float, float, int]),
    default=("log", 1e-3, 5.11e5, 120),
    show_default=True,
)
@_quad_options
@_output_options
def fit_check(grid, out, fmt, allow_flags, **quad):
    """Deviation of the ground-state rational fit from the computed density."""
    config = _config(**quad)
    hstate = HydrogenState(1, 0, 1)
    scale, e_min, e_max, count = grid
    ceiling = default_constants().mc2
    rows = []
    flags: list[str] = []
    for e in make_grid(e_min, min(e_max, ceiling * (1 + 5e-6)), count, scale).points:
        e = float(min(e, ceiling))
        gt, flag, _ = spectral_density_point(e, hstate, config)
        fit = fit_density(e, hstate)
        rows.append([e, gt, fit, abs(fit - gt) / gt, flag])
        if flag:
            flags.append(flag)
    worst = max(rows, key=lambda r: r[3])
    if fmt == "csv":
        write_csv(["E_eV", "gt_density", "fit_density", "rel_deviation", "flag"], rows, out)
    else:
        write_json(
            {
                "command": "fit-check",
                "metadata": _metadata(config),
                "max_rel_deviation": worst[3],
                "max_deviation_at_eV": worst[0],
                "samples": [
                    {"E_eV": r[0], "gt_density": r[1], "fit_density": r[2], "rel_deviation": r[3]}
                    for r in rows
                ],
            },
            out,
        )
    _finish(flags, allow_flags)


if __name__ == "__main__":
    main()
