"""Command-line interface.

Five subcommands tie the library into reproducible runs:

cavity     mode geometry, free spectral range, finesse, linewidth, and
           the double-resonance solution
purcell    per-transition coupling table, ensemble statistics, and the
           addressable-ion estimate
simulate   synthetic measurement traces (ple, saturation, hole, decay)
fit        least-squares fits of a trace CSV against a named model
plan       detected-rate sweep over diameter, repetition rate, and mode

Global flags: ``--config PATH`` (JSON parameter tree, bundled defaults
otherwise), ``--seed N`` (overrides the config seed), ``--json`` (machine
output, full precision), ``--out PATH`` (write data files and a manifest
next to them).  Exit codes: 0 success, 2 configuration or validation
error, 3 input-data error, 4 internal numerical failure.  Human-readable
text rounds values; the JSON output carries full precision of the same
numbers.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .config import (
    ConfigError,
    RunConfig,
    build_manifest,
    manifest_path_for,
    write_manifest,
)
from .core import TOOLKIT_VERSION, Nanoparticle, NumericalError
from .ensemble import (
    SpectralPopulation,
    default_hyperfine_classes,
    ensemble_purcell_stats,
    ions_in_bandwidth,
    total_ion_count,
)
from .fitting import MODELS, fit
from .optics import (
    cavity_linewidth,
    double_resonance,
    finesse,
    free_spectral_range,
    mode_waist,
    particle_scattering_loss,
)
from .planner import (
    CONTACT_LENGTH,
    PLAN_MODES,
    best_operating_point,
    sweep_grid,
    write_sweep_csv,
)
from .purcell import coupling_report, multimodal_sum
from .spectra import (
    decay_histogram,
    hole_spectrum,
    ple_scan,
    saturation_curve,
)
from .trace import TraceFormatError, read_trace_csv, write_trace

SIMULATE_KINDS = ("ple", "saturation", "hole", "decay")


class _CliError(Exception):
    """Error with a specific exit code."""

    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


_HZ_UNITS = ((1e12, "THz"), (1e9, "GHz"), (1e6, "MHz"), (1e3, "kHz"),
             (1.0, "Hz"))
_LENGTH_UNITS = ((1.0, "m"), (1e-3, "mm"), (1e-6, "um"), (1e-9, "nm"))
_TIME_UNITS = ((1.0, "s"), (1e-3, "ms"), (1e-6, "us"), (1e-9, "ns"))


def _scaled(value: float, units, digits: int = 4) -> str:
    for scale, suffix in units:
        if abs(value) >= scale:
            return f"{value / scale:.{digits}g} {suffix}"
    scale, suffix = units[-1]
    return f"{value / scale:.{digits}g} {suffix}"


def _hz(value: float) -> str:
    return _scaled(value, _HZ_UNITS)


def _length(value: float) -> str:
    return _scaled(value, _LENGTH_UNITS)


def _time(value: float) -> str:
    return _scaled(value, _TIME_UNITS)


def _loaded_budgets(config: RunConfig):
    """Bare budgets with the config nanoparticle's scattering added."""
    return tuple(
        budget.with_particle(particle_scattering_loss(
            config.nanoparticle.diameter, transition.wavelength))
        for transition, budget in zip(config.transitions,
                                      config.loss_budgets))


def _cmd_cavity(args, config: RunConfig, seed: int):
    geometry = config.geometry
    modes = []
    for transition, bare, loaded in zip(config.transitions,
                                        config.loss_budgets,
                                        _loaded_budgets(config)):
        modes.append({
            "wavelength": transition.wavelength,
            "waist": mode_waist(transition.wavelength,
                                geometry.radius_of_curvature,
                                geometry.cavity_length),
            "finesse": finesse(bare),
            "cavity_linewidth": cavity_linewidth(geometry.cavity_length,
                                                 bare),
            "finesse_loaded": finesse(loaded),
            "cavity_linewidth_loaded": cavity_linewidth(
                geometry.cavity_length, loaded),
        })
    report = {
        "cavity_length": geometry.cavity_length,
        "mode_order": geometry.mode_order,
        "free_spectral_range": free_spectral_range(geometry.cavity_length),
        "contact": {
            "cavity_length": CONTACT_LENGTH,
            "waist": mode_waist(config.transitions[0].wavelength,
                                geometry.radius_of_curvature,
                                CONTACT_LENGTH),
        },
        "modes": modes,
    }
    if len(config.transitions) >= 2:
        solution = double_resonance(config.transitions[0].wavelength,
                                    config.transitions[1].wavelength)
        report["double_resonance"] = solution.to_dict()

    lines = [
        f"cavity length {_length(report['cavity_length'])} "
        f"(mode order {report['mode_order']}), "
        f"FSR {_hz(report['free_spectral_range'])}",
    ]
    if "double_resonance" in report:
        sol = report["double_resonance"]
        lines.append(
            f"double resonance: orders {sol['mode_order_1']}/"
            f"{sol['mode_order_2']} at {_length(sol['cavity_length'])}, "
            f"residual {_hz(sol['residual_detuning'])}")
    for mode in modes:
        lines.append(
            f"mode {_length(mode['wavelength'])}: "
            f"waist {_length(mode['waist'])}, "
            f"finesse {mode['finesse']:.0f} "
            f"(linewidth {_hz(mode['cavity_linewidth'])}), "
            f"loaded {mode['finesse_loaded']:.0f} "
            f"({_hz(mode['cavity_linewidth_loaded'])})")
    lines.append(
        f"contact waist at {_length(CONTACT_LENGTH)}: "
        f"{_length(report['contact']['waist'])}")
    return report, lines, []


def _cmd_purcell(args, config: RunConfig, seed: int):
    geometry = config.geometry
    particle = config.nanoparticle
    reports = [
        coupling_report(transition, geometry, loaded)
        for transition, loaded in zip(config.transitions,
                                      _loaded_budgets(config))
    ]
    table = [r.to_table_row() for r in reports]
    total = multimodal_sum(r.effective_purcell for r in reports)

    stats = ensemble_purcell_stats(
        particle, geometry, config.transitions, config.loss_budgets,
        n_samples=config.mc_samples, seed=seed,
        antinode_offset_fraction=config.antinode_offset_fraction)

    ion_particle = Nanoparticle(
        diameter=config.ion_diameter,
        dopant_concentration=particle.dopant_concentration,
        cation_density=particle.cation_density)
    ions_total = total_ion_count(ion_particle)
    population = SpectralPopulation(
        total_ions=ions_total,
        inhomogeneous_fwhm=config.ion_inhomogeneous_fwhm,
        hyperfine_offsets=default_hyperfine_classes())
    addressed = ions_in_bandwidth(
        population, 0.0, config.ion_probe_bandwidth,
        seed=seed, n_draws=config.ion_draws)

    report = {
        "table": table,
        "total_effective_purcell": total,
        "ensemble": stats.to_dict(),
        "ions": {
            "particle_diameter": config.ion_diameter,
            "total": ions_total,
            "probe_bandwidth": config.ion_probe_bandwidth,
            "addressed": addressed.to_dict(),
        },
    }

    lines = ["wavelength    g            kappa        gamma_h      "
             "F_eff      C"]
    for row in table:
        lines.append(
            f"{_length(row['wavelength']):<13} {_hz(row['g']):<12} "
            f"{_hz(row['kappa']):<12} {_hz(row['gamma_h']):<12} "
            f"{row['f_eff']:<10.3f} {row['cooperativity']:.3g}")
    lines.append(f"summed effective Purcell factor: {total:.3f}")
    lines.append(
        f"ensemble over {_length(particle.diameter)} particle "
        f"({stats.n_samples} ions, seed {stats.seed}): "
        f"mean {stats.mean:.3f}, std {stats.std:.3f}, max {stats.max:.3f}")
    lines.append(
        f"ions in {_length(config.ion_diameter)} particle: {ions_total}; "
        f"addressed in {_hz(config.ion_probe_bandwidth)} probe: "
        f"{addressed.mean:.1f} +/- {addressed.std:.1f} "
        f"({addressed.n_draws} draws)")
    return report, lines, []


def _simulate_trace(kind: str, config: RunConfig, seed: int):
    params = config.simulate_params(kind)
    transition = config.transitions[0]
    if kind == "ple":
        span = params["span_multiple"] * params["inhomogeneous_fwhm"]
        grid = np.linspace(-0.5 * span, 0.5 * span, int(params["points"]))
        population = None
        if params.get("use_population"):
            particle = config.nanoparticle
            population = SpectralPopulation(
                total_ions=total_ion_count(particle),
                inhomogeneous_fwhm=params["inhomogeneous_fwhm"],
                hyperfine_offsets=default_hyperfine_classes())
        trace = ple_scan(
            params["inhomogeneous_fwhm"], 0.0, params["amplitude"],
            params["background"], grid, population=population,
            probe_fwhm=params.get("probe_fwhm"),
            noise=params.get("noise", "none"), seed=seed)
        derived = {"span": span}
    elif kind == "saturation":
        powers = np.geomspace(params["min_power"], params["max_power"],
                              int(params["points"]))
        trace = saturation_curve(
            powers, params["scale"], params["exponent"],
            params.get("background", 0.0),
            noise=params.get("noise", "none"), seed=seed)
        derived = {}
    elif kind == "hole":
        span = params["span_multiple"] * params["hole_fwhm"]
        grid = np.linspace(-0.5 * span, 0.5 * span, int(params["points"]))
        trace = hole_spectrum(
            grid, int(params["n_teeth"]), params["tooth_power"],
            params["hole_fwhm"], params["rate_scale"],
            noise=params.get("noise", "none"), seed=seed)
        derived = {"span": span}
    elif kind == "decay":
        lifetime = transition.free_space_lifetime
        effective = lifetime / (1.0 + params["effective_purcell"])
        grid = np.linspace(0.0, params["time_span_multiple"] * effective,
                           int(params["points"]))
        trace = decay_histogram(
            effective, grid, int(params["shots"]), params["amplitude"],
            params.get("background", 0.0),
            noise=params.get("noise", "poisson"), seed=seed)
        derived = {
            "effective_lifetime": effective,
            "free_space_lifetime": lifetime,
        }
    else:
        raise ConfigError(f"unknown simulation kind {kind!r}")
    return trace, params, derived


def _cmd_simulate(args, config: RunConfig, seed: int):
    if not args.out:
        raise _CliError(2, "simulate writes a trace file; pass --out PATH")
    try:
        trace, params, derived = _simulate_trace(args.kind, config, seed)
    except KeyError as exc:
        raise ConfigError(
            f"simulate.{args.kind}: missing parameter {exc}") from None
    out = Path(args.out)
    sidecar = write_trace(trace, out, metadata={
        "kind": args.kind,
        "parameters": params,
        "derived": derived,
    })
    report = {
        "kind": args.kind,
        "points": len(trace),
        "noise_model": trace.noise_model,
        "output": str(out),
        "sidecar": str(sidecar),
        "derived": derived,
    }
    lines = [f"wrote {args.kind} trace ({len(trace)} points, "
             f"noise {trace.noise_model}) to {out}"]
    if "effective_lifetime" in derived:
        lines.append(
            f"effective lifetime {_time(derived['effective_lifetime'])} "
            f"(free-space {_time(derived['free_space_lifetime'])})")
    lines.append(f"sidecar {sidecar}")
    return report, lines, [out, sidecar]


def _cmd_fit(args, config: RunConfig, seed: int):
    try:
        trace = read_trace_csv(args.input)
    except FileNotFoundError:
        raise _CliError(3, f"input error: no such file: {args.input}") \
            from None
    x_range = tuple(args.range) if args.range else None
    try:
        result = fit(args.model, trace, weights=args.weights,
                     x_range=x_range)
    except np.linalg.LinAlgError:
        raise
    except ValueError as exc:
        raise _CliError(3, f"input error: {exc}") from None

    report = result.to_dict()
    report["input"] = str(args.input)
    lines = [f"model {result.model} on {args.input} "
             f"({'converged' if result.converged else 'did not converge'}, "
             f"{result.iterations} iterations)"]
    for name, value in result.parameters.items():
        error = result.standard_errors[name]
        if error != error:  # NaN
            lines.append(f"  {name} = {value:.6g}")
        else:
            lines.append(f"  {name} = {value:.6g} +/- {error:.2g}")
    lines.append(f"weighted residual sum of squares: "
                 f"{result.residual_sum_of_squares:.6g}")
    outputs = []
    if args.out:
        out = Path(args.out)
        out.write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")
        lines.append(f"wrote report to {out}")
        outputs.append(out)
    return report, lines, outputs


def _cmd_plan(args, config: RunConfig, seed: int):
    rows = sweep_grid(
        config.plan_diameters, config.plan_repetition_rates,
        config.plan_modes, config.transitions, config.loss_budgets,
        config.geometry.radius_of_curvature, config.detection,
        config.excitation_time, config.excited_population,
        integration_time=config.plan_integration_time)
    try:
        best = best_operating_point(rows)
    except ValueError as exc:
        raise _CliError(2, f"plan error: {exc}") from None
    report = {
        "n_rows": len(rows),
        "modes": list(config.plan_modes),
        "integration_time": config.plan_integration_time,
        "best": best.to_dict(),
        "rows": [row.to_dict() for row in rows],
    }
    lines = [
        f"swept {len(rows)} operating points "
        f"({', '.join(config.plan_modes)})",
        f"best: {best.mode}, {_length(best.diameter)} particle at "
        f"{_hz(best.repetition_rate)} -> {best.rate:.1f} counts/s, "
        f"SNR {best.snr:.1f} in {config.plan_integration_time:g} s "
        f"(F_eff {best.effective_purcell:.2f})",
    ]
    outputs = []
    if args.out:
        out = write_sweep_csv(rows, args.out)
        lines.append(f"wrote sweep to {out}")
        outputs.append(out)
    return report, lines, outputs


_HANDLERS = {
    "cavity": _cmd_cavity,
    "purcell": _cmd_purcell,
    "simulate": _cmd_simulate,
    "fit": _cmd_fit,
    "plan": _cmd_plan,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH",
                        help="JSON run configuration "
                             "(bundled defaults if omitted)")
    common.add_argument("--seed", type=int, metavar="N",
                        help="override the config seed")
    common.add_argument("--json", action="store_true",
                        help="machine-readable output, full precision")
    common.add_argument("--out", metavar="PATH",
                        help="write data files here plus a manifest")

    parser = argparse.ArgumentParser(
        prog="fpcavity",
        description="Design and analysis toolkit for a fiber microcavity "
                    "coupled to narrow-line emitters in nanoparticles.")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("cavity", parents=[common],
                   help="mode geometry, finesse, and double resonance")
    sub.add_parser("purcell", parents=[common],
                   help="coupling table, ensemble stats, ion estimate")
    simulate = sub.add_parser("simulate", parents=[common],
                              help="generate a synthetic measurement trace")
    simulate.add_argument("kind", choices=SIMULATE_KINDS)
    fit_cmd = sub.add_parser("fit", parents=[common],
                             help="fit a trace CSV with a named model")
    fit_cmd.add_argument("model", choices=sorted(MODELS))
    fit_cmd.add_argument("input", help="trace CSV file")
    fit_cmd.add_argument("--range", nargs=2, type=float,
                         metavar=("LO", "HI"),
                         help="restrict the fit to an x window")
    fit_cmd.add_argument("--weights", choices=("poisson",),
                         help="residual weighting")
    sub.add_parser("plan", parents=[common],
                   help="sweep detected rate and SNR over the design grid")
    return parser


def _run(args, argv) -> int:
    if args.config:
        config = RunConfig.from_file(args.config)
    else:
        config = RunConfig.default()
    seed = args.seed if args.seed is not None else config.seed

    report, lines, outputs = _HANDLERS[args.command](args, config, seed)

    command = ["fpcavity", *argv]
    manifest = build_manifest(command, config, seed, outputs)
    if outputs:
        manifest_file = write_manifest(
            manifest, manifest_path_for(outputs[0]))
        lines.append(f"manifest {manifest_file}")

    if args.json:
        report["manifest"] = manifest.to_dict()
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        for line in lines:
            print(line)
        print(f"config sha256 {manifest.config_sha256[:12]}, seed {seed}, "
              f"toolkit {TOOLKIT_VERSION}")
    return 0


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _run(args, list(argv))
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except _CliError as exc:
        print(str(exc), file=sys.stderr)
        return exc.code
    except TraceFormatError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 3
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except np.linalg.LinAlgError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 4
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
