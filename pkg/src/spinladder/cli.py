"""Command-line front end.

Usage: spinladder <experiment> [--config FILE] [--key value ...] --out DIR

One subcommand per experiment. Every config key is also a flag; flags
override the config file. Each run writes CSV results plus a JSON sidecar
into the output directory.

Exit codes: 0 success, 2 bad configuration or arguments, 3 numeric failure
during diagonalization or analysis, 4 output could not be written.
"""

import argparse
import sys
from dataclasses import fields

import numpy as np

from . import __version__
from .errors import (ConfigurationError, InsufficientDataError,
                     InvalidArgumentError, NumericFailureError, OutputError)
from .lattice import dressed_gap
from .evolution import TimeGrid
from . import experiments, io, signals


# Subcommands whose measurement needs more than the reference window get
# their own grid defaults; an explicit t_end or n_points still wins.
_COMMAND_DEFAULTS = {
    "freq-table": {"t_end": 40.0, "n_points": 8001},
}


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="spinladder",
        description="Entanglement transfer experiments on a two-leg XXZ ladder.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in io.EXPERIMENTS:
        cmd = sub.add_parser(name, help=f"run the {name} experiment")
        cmd.add_argument("--config", metavar="FILE", help="flat key = value config file")
        cmd.add_argument("--out", metavar="DIR", required=True, help="output directory")
        for field in fields(io.ExperimentConfig):
            flag = "--" + field.name.replace("_", "-")
            names = [flag] if flag == "--" + field.name else [flag, "--" + field.name]
            cmd.add_argument(*names, dest="cfg_" + field.name, metavar="V", default=None)
    return parser


def _resolve_config(args, command):
    file_values = {}
    if args.config is not None:
        try:
            with open(args.config) as handle:
                text = handle.read()
        except OSError as exc:
            raise ConfigurationError(f"cannot read config file {args.config}: {exc.strerror}")
        file_values = io.parse_config_text(text)
    flag_values = {name: value for name, value in vars(args).items()
                   if name.startswith("cfg_") and value is not None}
    flag_values = io.convert_overrides(
        {name[len("cfg_"):]: value for name, value in flag_values.items()})
    return io.build_config(_COMMAND_DEFAULTS.get(command, {}), file_values, flag_values)


def _common_extras(config):
    return {
        "config": io.config_echo(config),
        "seed": config.seed,
        "version": __version__,
        "thresholds": {"mediating_cutoff": config.mediating_cutoff,
                       "prominence": config.prominence},
    }


def _out(args, name):
    import os
    return os.path.join(args.out, name)


def cmd_reference(args, config):
    params = io.config_params(config)
    traj = experiments.run_reference(params, state_kind=config.state,
                                     grid=io.config_grid(config))
    extras = _common_extras(config)
    extras["omega_fast"] = dressed_gap(params)
    terminal = traj.pair_concurrence[traj.terminal_label]
    try:
        extras["t_slow"] = signals.envelope_period(terminal, min_prominence=config.prominence)
    except InsufficientDataError:
        pass  # window too short for the slow envelope, leave it out
    io.write_trajectory(traj, _out(args, "trajectory.csv"),
                        _out(args, "trajectory.json"), extras)
    return 0


def cmd_field_sweep(args, config):
    params = io.config_params(config)
    result = experiments.sweep_field(io.config_floats(config, "h_values"), params,
                                     window_factor=config.window_factor,
                                     min_prominence=config.prominence)
    io.write_sweep(result, _out(args, "sweep.csv"), _out(args, "sweep.json"),
                   _common_extras(config))
    return 0


def cmd_heatmap(args, config):
    params = io.config_params(config)
    g_values = np.linspace(config.g_min, config.g_max, config.n_g)
    d_values = np.linspace(config.d_min, config.d_max, config.n_d)
    heatmap = experiments.anisotropy_heatmap(g_values, d_values, params,
                                             grid=io.config_grid(config))
    io.write_heatmap(heatmap, _out(args, "heatmap.csv"), _out(args, "heatmap.json"),
                     _common_extras(config))
    return 0


def cmd_disorder(args, config):
    params = io.config_params(config)
    grid = io.config_grid(config)
    for delta in io.config_floats(config, "deltas"):
        stats = experiments.disorder_ensemble(delta, config.n_samples, config.seed,
                                              params, grid=grid)
        tag = f"delta{delta:g}"
        io.write_ensemble(stats, _out(args, f"disorder_{tag}_curves.csv"),
                          _out(args, f"disorder_{tag}_peaks.csv"),
                          _out(args, f"disorder_{tag}.json"),
                          _common_extras(config))
    return 0


def cmd_scaling(args, config):
    params = io.config_params(config)
    grid = io.config_grid(config)
    summary = _common_extras(config)
    summary["runs"] = []
    for n in (int(v) for v in io.config_floats(config, "n_values")):
        traj = experiments.scaling_run(n, params, grid=grid)
        io.write_trajectory(traj, _out(args, f"scaling_n{n}.csv"))
        terminal = traj.pair_concurrence[traj.terminal_label]
        peaks = signals.find_peaks(terminal, min_prominence=config.prominence)
        entry = dict(io.trajectory_summary(traj))
        entry["n_rungs"] = n
        if peaks:
            entry["first_peak_time"], entry["first_peak_value"] = peaks[0]
        summary["runs"].append(entry)
    io.write_sidecar(_out(args, "scaling.json"), summary)
    return 0


def cmd_freq_table(args, config):
    params = io.config_params(config)
    rows = experiments.frequency_table(io.config_floats(config, "d_values"), params,
                                       t_end=config.t_end, n_points=config.n_points)
    io.write_table([(r.d, r.predicted, r.measured, r.ratio) for r in rows],
                   _out(args, "freq_table.csv"), ["d", "predicted", "measured", "ratio"])
    extras = _common_extras(config)
    extras["rows"] = [{"d": r.d, "predicted": r.predicted, "measured": r.measured,
                       "ratio": r.ratio} for r in rows]
    io.write_sidecar(_out(args, "freq_table.json"), extras)
    return 0


def cmd_effective_check(args, config):
    params = io.config_params(config)
    rows = experiments.effective_model_check(
        params, h_values=io.config_floats(config, "eff_h_values"),
        window_factor=config.window_factor, min_prominence=config.prominence)
    io.write_table(
        [(r.h, r.t_slow_full, r.j_eff, r.alpha, r.t_slow_effective, r.relative_error)
         for r in rows],
        _out(args, "effective_check.csv"),
        ["h", "T_slow_full", "J_eff", "alpha", "T_slow_effective", "rel_error"])
    extras = _common_extras(config)
    extras["rows"] = [{"h": r.h, "t_slow_full": r.t_slow_full, "j_eff": r.j_eff,
                       "alpha": r.alpha, "t_slow_effective": r.t_slow_effective,
                       "relative_error": r.relative_error} for r in rows]
    io.write_sidecar(_out(args, "effective_check.json"), extras)
    return 0


_COMMANDS = {
    "reference": cmd_reference,
    "field-sweep": cmd_field_sweep,
    "heatmap": cmd_heatmap,
    "disorder": cmd_disorder,
    "scaling": cmd_scaling,
    "freq-table": cmd_freq_table,
    "effective-check": cmd_effective_check,
}


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        config = _resolve_config(args, args.experiment)
        return _COMMANDS[args.experiment](args, config)
    except (ConfigurationError, InvalidArgumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (NumericFailureError, InsufficientDataError) as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 3
    except (OutputError, OSError) as exc:
        print(f"output error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
