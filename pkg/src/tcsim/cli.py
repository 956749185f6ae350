"""Command-line front end: one subcommand per experiment class.

Exit codes: 0 success, 2 configuration error (unknown flags, invalid
combinations, unwritable output), 1 runtime failure.  All energies are in
units of g and all times in 1/g.  A JSON config file may predefine any flag
value (by its long name with dashes or underscores); explicit flags win.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import analytic
from ._version import __version__
from .hamiltonian import SystemParams, build_full_qubitized, build_fourlevel_qubitized, build_rwa_qubitized
from .simulator import DensityMatrix, TrotterConfig, evolve, evolve_damped, init_state, target_state
from .sweeps import (
    SweepGrid,
    asymmetry_scan,
    coupling_ratio_sweep,
    detuning_heatmap,
    resolve_horizon,
    rwa_comparison,
    timestep_benchmark,
    write_results,
)
from .hamiltonian import LAYOUT_FOUR_LEVEL, LAYOUT_THREE_QUBIT


class ConfigError(Exception):
    """Invalid flag combination or unusable configuration."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # route argparse errors through exit code 2
        raise ConfigError(message)


def _add_system_flags(p: argparse.ArgumentParser):
    p.add_argument("--omega-c", type=float, default=100.0, help="cavity frequency (units of g)")
    p.add_argument("--delta1", type=float, default=0.0, help="qubit-1 detuning (units of g)")
    p.add_argument("--delta2", type=float, default=0.0, help="qubit-2 detuning (units of g)")
    p.add_argument("--g1", type=float, default=1.0, help="qubit-1 coupling (units of g)")
    p.add_argument("--g2", type=float, default=1.0, help="qubit-2 coupling (units of g)")
    p.add_argument("--kappa", type=float, default=0.0, help="cavity damping rate (units of g)")


def _add_run_flags(p: argparse.ArgumentParser):
    p.add_argument("--dt", type=float, default=0.01, help="Trotter step (1/g)")
    p.add_argument("--hamiltonian", choices=("full", "rwa"), default="full",
                   help="evolution generator (full keeps counter-rotating terms)")
    p.add_argument("--cavity-levels", type=int, choices=(2, 4), default=2,
                   help="cavity truncation: 2 (one qubit) or 4 (two qubits)")
    p.add_argument("--phase-frame", choices=("lab", "cavity"), default="lab",
                   help="frame for reported phases")
    p.add_argument("--target-convention", choices=("corrected", "raw"), default="corrected",
                   help="transfer target: pi-corrected superposition or literal")
    p.add_argument("--superposition", nargs=2, metavar=("ALPHA", "BETA"), default=None,
                   help="ground/excited weights of the qubit-1 input (complex literals)")


def _add_output_flags(p: argparse.ArgumentParser):
    p.add_argument("-o", "--output", default=None, help="output file path")
    p.add_argument("--format", choices=("csv", "json"), default="csv", help="output format")
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                   help="parallel workers for sweep cells")


def build_parser() -> _Parser:
    parser = _Parser(prog="tcsim", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("--config", default=None, help="JSON file with default flag values")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p = sub.add_parser("evolve", help="single unitary trajectory to CSV")
    _add_system_flags(p), _add_run_flags(p), _add_output_flags(p)
    p.add_argument("--t-max", type=float, default=None, help="evolution horizon (1/g)")
    p.add_argument("--record-stride", type=int, default=1, help="steps between samples")
    p.add_argument("--coherence-mags", action="store_true",
                   help="append coherence-magnitude columns to the CSV")

    p = sub.add_parser("damped", help="density-matrix trajectory with cavity loss")
    _add_system_flags(p), _add_run_flags(p), _add_output_flags(p)
    p.add_argument("--t-max", type=float, default=None, help="evolution horizon (1/g)")
    p.add_argument("--record-stride", type=int, default=1, help="steps between samples")
    p.add_argument("--coherence-mags", action="store_true",
                   help="append coherence-magnitude columns to the CSV")

    p = sub.add_parser("heatmap", help="max-fidelity grid over detunings")
    _add_system_flags(p), _add_run_flags(p), _add_output_flags(p)
    p.add_argument("--range", nargs=2, type=float, default=(-5.0, 5.0), metavar=("MIN", "MAX"),
                   help="detuning range for both axes (units of g)")
    p.add_argument("--points", type=int, default=11, help="grid points per axis")
    p.add_argument("--horizon", default="auto",
                   help="per-cell horizon in 1/g, or 'auto'")

    p = sub.add_parser("ratio-sweep", help="fidelity versus coupling ratio g2/g1")
    _add_system_flags(p), _add_run_flags(p), _add_output_flags(p)
    p.add_argument("--ratios", nargs="+", type=float,
                   default=(0.25, 0.5, 1.0, 2.0, 4.0), help="g2/g1 values")
    p.add_argument("--detunings", nargs="*", type=float, default=(),
                   help="equal-detuning configurations to add beside resonant")

    p = sub.add_parser("compare-rwa", help="full-vs-RWA fidelity versus g/omega_c")
    _add_system_flags(p), _add_run_flags(p), _add_output_flags(p)
    p.add_argument("--g-over-omega", nargs="+", type=float,
                   default=(0.001, 0.005, 0.01, 0.05, 0.1), help="coupling strengths")

    p = sub.add_parser("asymmetry", help="sign-of-detuning asymmetry scan")
    _add_system_flags(p), _add_run_flags(p), _add_output_flags(p)
    p.add_argument("--deltas", nargs="+", type=float,
                   default=(10.0, -10.0), help="equal detunings (nonzero, units of g)")
    p.add_argument("--gap-horizon", type=float, default=60.0,
                   help="horizon for the fidelity-gap search (1/g)")

    p = sub.add_parser("benchmark-dt", help="Trotter error versus step size")
    _add_system_flags(p), _add_run_flags(p), _add_output_flags(p)
    p.add_argument("--dts", nargs="+", type=float,
                   default=(0.005, 0.01, 0.02, 0.04, 0.08), help="step sizes (1/g)")

    p = sub.add_parser("oracle", help="print a closed-form reference value")
    p.add_argument("--which", required=True,
                   choices=("max-p2", "transfer-time", "transfer-time-dispersive",
                            "transfer-time-nonrwa", "rabi", "coupling-j", "trotter-bound"))
    p.add_argument("--g1", type=float, default=1.0, help="coupling 1 (units of g)")
    p.add_argument("--g2", type=float, default=1.0, help="coupling 2 (units of g)")
    p.add_argument("--delta1", type=float, default=0.0, help="detuning 1 (units of g)")
    p.add_argument("--delta2", type=float, default=0.0, help="detuning 2 (units of g)")
    p.add_argument("--omega-c", type=float, default=100.0, help="cavity frequency (units of g)")
    p.add_argument("--t-max", type=float, default=1.0, help="total time for error bounds (1/g)")
    p.add_argument("--dt", type=float, default=0.01, help="step size for error bounds (1/g)")
    return parser


def _apply_config_file(parser: _Parser, argv: list[str]) -> list[str]:
    """Fold --config file values in as subparser defaults (flags still win)."""
    if "--config" not in argv:
        return argv
    i = argv.index("--config")
    if i + 1 >= len(argv):
        raise ConfigError("--config needs a file path")
    path = argv[i + 1]
    try:
        with open(path) as fh:
            values = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}")
    if not isinstance(values, dict):
        raise ConfigError("config file must hold a JSON object of flag values")
    defaults = {str(k).replace("-", "_"): v for k, v in values.items()}
    subparsers = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    for sub in subparsers.choices.values():
        known = {a.dest for a in sub._actions}
        sub.set_defaults(**{k: v for k, v in defaults.items() if k in known})
    return argv


def _params_from_args(args) -> SystemParams:
    try:
        return SystemParams(
            omega_c=args.omega_c, delta_1=args.delta1, delta_2=args.delta2,
            g_1=args.g1, g_2=args.g2, kappa=getattr(args, "kappa", 0.0),
        )
    except ValueError as exc:
        raise ConfigError(str(exc))


def _state_spec_from_args(args):
    if getattr(args, "superposition", None) is None:
        return "polarized"
    try:
        alpha, beta = (complex(tok) for tok in args.superposition)
    except ValueError as exc:
        raise ConfigError(f"bad superposition weights: {exc}")
    return ("superposition", alpha, beta)


def _build_hamiltonian(params, args):
    if args.cavity_levels == 4:
        if params.kappa > 0:
            raise ConfigError("cavity damping is not supported with the 4-level cavity")
        if args.hamiltonian == "rwa":
            raise ConfigError("the 4-level cavity is only built without the RWA")
        return build_fourlevel_qubitized(params), LAYOUT_FOUR_LEVEL
    builder = build_rwa_qubitized if args.hamiltonian == "rwa" else build_full_qubitized
    return builder(params), LAYOUT_THREE_QUBIT


def _require_output(args):
    if not args.output:
        raise ConfigError("an output path is required (-o/--output)")
    return args.output


def _default_horizon(params: SystemParams) -> float:
    rabi2 = params.g_1**2 + params.g_2**2
    if rabi2 == 0:
        raise ConfigError("zero couplings leave no transfer dynamics to simulate")
    delta = max(abs(params.delta_1), abs(params.delta_2))
    if delta >= 5.0:
        return 1.2 * math.pi * delta / rabi2
    return 1.2 * math.pi / math.sqrt(rabi2)


def _cmd_evolve(args) -> int:
    params = _params_from_args(args)
    if params.kappa > 0:
        raise ConfigError("evolve is unitary; use the damped subcommand for kappa > 0")
    h, layout = _build_hamiltonian(params, args)
    spec = _state_spec_from_args(args)
    t_max = args.t_max if args.t_max is not None else _default_horizon(params)
    cfg = TrotterConfig.for_horizon(t_max, dt=args.dt, record_stride=args.record_stride)
    traj = evolve(
        init_state(spec, layout), h, cfg,
        target=target_state(spec, layout, args.target_convention),
        phase_frame=args.phase_frame, omega_c=params.omega_c,
    )
    out = _require_output(args)
    traj.to_csv(out, include_coherence_mags=args.coherence_mags)
    k = int(np.argmax(traj.fidelity))
    print(f"evolve: F_max={traj.fidelity[k]:.6f} at t={traj.times[k]:.4f} -> {out}")
    return 0


def _cmd_damped(args) -> int:
    params = _params_from_args(args)
    if args.cavity_levels == 4:
        raise ConfigError("cavity damping is not supported with the 4-level cavity")
    h, layout = _build_hamiltonian(params, args)
    spec = _state_spec_from_args(args)
    t_max = args.t_max if args.t_max is not None else _default_horizon(params)
    cfg = TrotterConfig.for_horizon(t_max, dt=args.dt, record_stride=args.record_stride)
    rho0 = DensityMatrix.from_state(init_state(spec, layout))
    traj = evolve_damped(
        rho0, h, params.kappa, cfg,
        target=target_state(spec, layout, args.target_convention),
        phase_frame=args.phase_frame, omega_c=params.omega_c,
    )
    out = _require_output(args)
    traj.to_csv(out, include_coherence_mags=args.coherence_mags)
    print(f"damped: excitation {traj.total_excitation[0]:.4f} -> "
          f"{traj.total_excitation[-1]:.4f} over t={traj.times[-1]:.4f} -> {out}")
    return 0


def _cmd_heatmap(args) -> int:
    params = _params_from_args(args)
    if params.kappa > 0:
        raise ConfigError("heatmap sweeps are unitary; kappa must be 0")
    horizon = args.horizon
    if horizon != "auto":
        try:
            horizon = float(horizon)
        except ValueError:
            raise ConfigError(f"horizon must be a number or 'auto', got {horizon!r}")
    if args.cavity_levels == 4 and args.hamiltonian == "rwa":
        raise ConfigError("the 4-level cavity is only built without the RWA")
    kind = "fourlevel" if args.cavity_levels == 4 else args.hamiltonian
    grid = SweepGrid(
        delta1_range=(args.range[0], args.range[1], args.points),
        delta2_range=(args.range[0], args.range[1], args.points),
        horizon=horizon, dt=args.dt, state_spec=_state_spec_from_args(args),
        hamiltonian_kind=kind, target_convention=args.target_convention,
    )
    result = detuning_heatmap(params, grid, jobs=args.jobs)
    out = _require_output(args)
    write_results(result, out, args.format)
    i, j = np.unravel_index(np.argmax(result.f_max), result.f_max.shape)
    print(f"heatmap: {result.f_max.size} cells, horizon={resolve_horizon(params, grid):.4g}, "
          f"best F_max={result.f_max[i, j]:.6f} at delta=({result.delta1_axis[i]:g},"
          f"{result.delta2_axis[j]:g}) -> {out}")
    return 0


def _cmd_ratio_sweep(args) -> int:
    params = _params_from_args(args)
    configs = ["resonant"] + list(args.detunings)
    table = coupling_ratio_sweep(params, args.ratios, configs, dt=args.dt)
    out = _require_output(args)
    write_results(table, out, args.format)
    best = max(table.rows, key=lambda r: r[2])
    print(f"ratio-sweep: best F_max={best[2]:.6f} at ratio={best[1]:g} ({best[0]}) -> {out}")
    return 0


def _cmd_compare_rwa(args) -> int:
    params = _params_from_args(args)
    table = rwa_comparison(params, args.g_over_omega, cavity_levels=args.cavity_levels, dt=args.dt)
    out = _require_output(args)
    write_results(table, out, args.format)
    print(f"compare-rwa: {len(table.rows)} coupling strengths, cavity_levels={args.cavity_levels} -> {out}")
    return 0


def _cmd_asymmetry(args) -> int:
    params = _params_from_args(args)
    if any(d == 0 for d in args.deltas):
        raise ConfigError("asymmetry deltas must be nonzero")
    table = asymmetry_scan(params, args.deltas, dt=args.dt, gap_horizon=args.gap_horizon)
    out = _require_output(args)
    write_results(table, out, args.format)
    print(f"asymmetry: {len(table.rows)} detunings -> {out}")
    return 0


def _cmd_benchmark_dt(args) -> int:
    params = _params_from_args(args)
    table, energy_runs = timestep_benchmark(params, args.dts)
    out = _require_output(args)
    write_results(table, out, args.format)
    energy_path = f"{out}.energy.csv"
    with open(energy_path, "w", newline="") as fh:
        fh.write("dt,t,energy_deviation\n")
        for dt, traj in sorted(energy_runs.items()):
            e0 = traj.energy[0]
            for t, e in zip(traj.times, traj.energy):
                fh.write(f"{dt!r},{t!r},{e - e0!r}\n")
    worst = max(table.rows, key=lambda r: r[1])
    print(f"benchmark-dt: worst 1-F_max={worst[1]:.3e} at dt={worst[0]:g} -> {out}, {energy_path}")
    return 0


def _cmd_oracle(args) -> int:
    which = args.which
    if which == "max-p2":
        value = analytic.max_p2(args.g1, args.g2)
    elif which == "transfer-time":
        value = analytic.transfer_time_resonant(args.g1, args.g2)
    elif which == "transfer-time-dispersive":
        value = analytic.transfer_time_dispersive(args.g1, args.delta1)
    elif which == "transfer-time-nonrwa":
        value = analytic.transfer_time_nonrwa(args.g1, args.delta1, args.omega_c + args.delta1)
    elif which == "rabi":
        value = analytic.rabi_frequency(args.g1, args.delta1)
    elif which == "coupling-j":
        value = analytic.effective_coupling_J(
            args.g1, args.g2, args.delta1, args.delta2,
            args.omega_c + args.delta1, args.omega_c + args.delta2,
        )
    else:
        value = analytic.trotter_error_bound(
            args.g1, args.g2, args.delta1, args.delta2, args.t_max, args.dt
        )
    print(repr(value))
    return 0


_COMMANDS = {
    "evolve": _cmd_evolve,
    "damped": _cmd_damped,
    "heatmap": _cmd_heatmap,
    "ratio-sweep": _cmd_ratio_sweep,
    "compare-rwa": _cmd_compare_rwa,
    "asymmetry": _cmd_asymmetry,
    "benchmark-dt": _cmd_benchmark_dt,
    "oracle": _cmd_oracle,
}


def run(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        argv = _apply_config_file(parser, argv)
        args = parser.parse_args(argv)
        if args.command is None:
            raise ConfigError("a subcommand is required (see --help)")
        if getattr(args, "output", None):
            outdir = os.environ.get("TCSIM_OUTPUT_DIR")
            if outdir and not os.path.isabs(args.output):
                args.output = os.path.join(outdir, args.output)
        try:
            return _COMMANDS[args.command](args)
        except (ValueError, OSError) as exc:
            # invalid parameter combinations and unwritable outputs are
            # configuration problems, not crashes
            raise ConfigError(str(exc))
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001 - runtime failure boundary
        print(f"runtime error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
