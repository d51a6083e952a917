"""Config parsing and on-disk result formats.

Configs are flat `key = value` lines with `#` comments; command-line flags
override file values. Results are CSV tables plus a JSON sidecar carrying
the full resolved config, so every output can be re-run bitwise from its
own sidecar. Floats are serialized with repr, which round-trips exactly.
"""

import json
import os
from dataclasses import dataclass, fields

import numpy as np

from .errors import ConfigurationError, OutputError
from .lattice import LadderParams, INITIAL_STATE_KINDS, mediating_mask, uniform_mask
from .evolution import TimeGrid

EXPERIMENTS = ("reference", "field-sweep", "heatmap", "disorder", "scaling",
               "freq-table", "effective-check")


@dataclass
class ExperimentConfig:
    """All knobs for one experiment invocation, after defaulting.

    Defaults are the reference set: J_perp = J_parallel = 1, g = 1, d = 0.5,
    h = 100, N = 3, the Bell pair on rung 1, t in [0, 10] with 4001 points,
    seed 42.
    """

    n_rungs: int = 3
    j_perp: float = 1.0
    j_parallel: float = 1.0
    g: float = 1.0
    d: float = 0.5
    h: float = 100.0
    field_mask: str = "mediating"
    state: str = "phi_plus"
    t_end: float = 10.0
    n_points: int = 4001
    seed: int = 42
    mediating_cutoff: float = 0.1
    prominence: float = 0.05
    # field-sweep / effective-check
    h_values: str = "50,100,200,400"
    window_factor: float = 1.2
    eff_h_values: str = "100,200,400"
    # heatmap
    g_min: float = 0.0
    g_max: float = 1.0
    n_g: int = 10
    d_min: float = 0.0
    d_max: float = 0.9
    n_d: int = 10
    # disorder
    deltas: str = "0.05,0.1,0.2"
    n_samples: int = 200
    # scaling
    n_values: str = "4,5"
    # freq-table
    d_values: str = "0,0.1,0.5,1.0"


_FIELD_TYPES = {f.name: f.type for f in fields(ExperimentConfig)}


def _convert(key, raw, line=None):
    kind = _FIELD_TYPES[key]
    raw = raw.strip()
    try:
        if kind is int or kind == "int":
            return int(raw)
        if kind is float or kind == "float":
            return float(raw)
        return raw
    except ValueError:
        raise ConfigurationError(f"cannot parse {raw!r} as {kind}", key=key, line=line) from None


def parse_config_text(text):
    """Raw `key = value` lines to a typed dict; errors carry the line number."""
    values = {}
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigurationError(f"expected 'key = value', got {raw_line.strip()!r}", line=lineno)
        key, _, raw = line.partition("=")
        key = key.strip()
        if key not in _FIELD_TYPES:
            raise ConfigurationError("unknown config key", key=key, line=lineno)
        values[key] = _convert(key, raw, line=lineno)
    return values


def convert_overrides(overrides):
    values = {}
    for key, raw in (overrides or {}).items():
        if key not in _FIELD_TYPES:
            raise ConfigurationError("unknown config key", key=key)
        values[key] = _convert(key, str(raw))
    return values


def build_config(*value_dicts):
    """Merge value dicts left to right (later wins) into a validated config."""
    values = {}
    for d in value_dicts:
        values.update(d)
    config = ExperimentConfig(**values)
    _validate(config)
    return config


def parse_config(text=None, overrides=None):
    """Build an ExperimentConfig from config text and/or override pairs.

    Unknown keys are an error, never silently ignored. Overrides (typically
    from command-line flags) win over file values.
    """
    return build_config(parse_config_text(text or ""), convert_overrides(overrides))


def _validate(config):
    if not 2 <= config.n_rungs <= 5:
        raise ConfigurationError(
            f"n_rungs must be between 2 and 5 for dense diagonalization, got {config.n_rungs}",
            key="n_rungs")
    if config.state not in INITIAL_STATE_KINDS:
        raise ConfigurationError(f"state must be one of {INITIAL_STATE_KINDS}", key="state")
    if config.n_points < 2:
        raise ConfigurationError("n_points must be >= 2", key="n_points")
    if config.t_end <= 0:
        raise ConfigurationError("t_end must be positive", key="t_end")
    if config.field_mask not in ("mediating", "uniform"):
        try:
            rungs = [int(tok) for tok in config.field_mask.split(",") if tok.strip()]
        except ValueError:
            raise ConfigurationError(
                "field_mask must be 'mediating', 'uniform', or comma-separated rung indices",
                key="field_mask") from None
        if not all(1 <= r <= config.n_rungs for r in rungs):
            raise ConfigurationError(f"field_mask rungs outside 1..{config.n_rungs}", key="field_mask")
    for key in ("h_values", "eff_h_values", "deltas", "d_values"):
        try:
            [float(tok) for tok in getattr(config, key).split(",") if tok.strip()]
        except ValueError:
            raise ConfigurationError("expected comma-separated numbers", key=key) from None
    try:
        n_values = [int(tok) for tok in config.n_values.split(",") if tok.strip()]
    except ValueError:
        raise ConfigurationError("expected comma-separated integers", key="n_values") from None
    for n in n_values:
        if n > 5:
            raise ConfigurationError(f"n_values entry {n} exceeds the dense bound of 5", key="n_values")
    for key in ("n_g", "n_d"):
        if getattr(config, key) < 1:
            raise ConfigurationError("grid size must be >= 1", key=key)
    if config.n_samples < 1:
        raise ConfigurationError("n_samples must be >= 1", key="n_samples")


def config_params(config):
    """LadderParams described by a config."""
    if config.field_mask == "mediating":
        mask = mediating_mask(config.n_rungs)
    elif config.field_mask == "uniform":
        mask = uniform_mask(config.n_rungs)
    else:
        mask = frozenset(int(tok) for tok in config.field_mask.split(",") if tok.strip())
    return LadderParams(n_rungs=config.n_rungs, j_perp=config.j_perp,
                        j_parallel=config.j_parallel, g=config.g, d=config.d,
                        h=config.h, field_mask=mask)


def config_grid(config):
    return TimeGrid(0.0, config.t_end, config.n_points)


def config_floats(config, key):
    return [float(tok) for tok in getattr(config, key).split(",") if tok.strip()]


def config_echo(config):
    return {f.name: getattr(config, f.name) for f in fields(ExperimentConfig)}


def _fmt(value):
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    return repr(float(value))


def _write_lines(path, lines):
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OutputError(f"could not write {exc.strerror or exc}", path=path) from exc


def write_sidecar(path, summary):
    """JSON summary next to a CSV; floats keep full precision through repr."""
    def clean(obj):
        if isinstance(obj, dict):
            return {k: clean(v) for k, v in obj.items()}
        if isinstance(obj, (list, tuple)):
            return [clean(v) for v in obj]
        if isinstance(obj, np.ndarray):
            return [clean(v) for v in obj.tolist()]
        if isinstance(obj, (np.floating,)):
            return float(obj)
        if isinstance(obj, (np.integer,)):
            return int(obj)
        return obj
    try:
        os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
        with open(path, "w") as handle:
            json.dump(clean(summary), handle, indent=2)
            handle.write("\n")
    except OSError as exc:
        raise OutputError(f"could not write {exc.strerror or exc}", path=path) from exc


def trajectory_summary(traj):
    """Scalar digest of a trajectory: F_max, argmax time, per-pair max concurrence."""
    fid = traj.fidelity_terminal
    k = int(np.argmax(fid.values))
    return {
        "f_max": float(fid.values[k]),
        "f_argmax_time": float(fid.times[k]),
        "max_concurrence": {label: float(s.values.max())
                            for label, s in traj.pair_concurrence.items()},
    }


def write_trajectory(traj, csv_path, sidecar_path=None, extras=None):
    """CSV with one row per grid point, plus an optional JSON summary sidecar.

    Header: t, one concurrence column per rung pair, F, then any
    mutual-information channels.
    """
    labels = list(traj.pair_concurrence)
    header = ["t"] + [f"C{label}" for label in labels] + ["F"]
    columns = [traj.fidelity_terminal.times]
    columns += [traj.pair_concurrence[label].values for label in labels]
    columns += [traj.fidelity_terminal.values]
    if traj.mutual_info:
        header += list(traj.mutual_info)
        columns += [series.values for series in traj.mutual_info.values()]
    lines = [",".join(header)]
    for row in zip(*columns):
        lines.append(",".join(_fmt(v) for v in row))
    _write_lines(csv_path, lines)
    if sidecar_path is not None:
        summary = dict(extras or {})
        summary.update(trajectory_summary(traj))
        write_sidecar(sidecar_path, summary)


def write_table(rows, csv_path, header):
    """Generic CSV writer for a list of per-row value tuples."""
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    _write_lines(csv_path, lines)


def write_sweep(result, csv_path, sidecar_path=None, extras=None):
    rows = [(r.h, r.t_slow, r.f_max, r.flag or "") for r in result.rows]
    write_table(rows, csv_path, ["h", "T_slow", "F_max", "flag"])
    if sidecar_path is not None:
        summary = dict(extras or {})
        if result.fit is not None:
            summary["fit"] = {
                "slope": result.fit.slope,
                "intercept": result.fit.intercept,
                "r_squared": result.fit.r_squared,
                "alpha": result.fit.alpha,
            }
        summary["rows"] = [
            {"h": r.h, "t_slow": r.t_slow, "f_max": r.f_max, "flag": r.flag,
             "prefactor": None if r.t_slow is None or r.h <= 0 else r.t_slow / r.h}
            for r in result.rows
        ]
        write_sidecar(sidecar_path, summary)


def write_heatmap(heatmap, csv_path, sidecar_path=None, extras=None):
    """Matrix CSV: first row lists d values, first column lists g values."""
    lines = [",".join(["g\\d"] + [_fmt(d) for d in heatmap.d_values])]
    for i, g in enumerate(heatmap.g_values):
        lines.append(",".join([_fmt(g)] + [_fmt(v) for v in heatmap.f_max[i]]))
    _write_lines(csv_path, lines)
    if sidecar_path is not None:
        best = np.unravel_index(int(np.argmax(heatmap.f_max)), heatmap.f_max.shape)
        summary = dict(extras or {})
        summary.update({
            "f_max_overall": float(heatmap.f_max.max()),
            "f_max_cell": {"g": float(heatmap.g_values[best[0]]),
                           "d": float(heatmap.d_values[best[1]])},
            "f_min_overall": float(heatmap.f_max.min()),
        })
        write_sidecar(sidecar_path, summary)


def write_ensemble(stats, curves_csv_path, peaks_csv_path, sidecar_path=None, extras=None):
    """Mean/std fidelity curves and per-realization peak fidelities."""
    curves = zip(stats.mean_fidelity.times, stats.mean_fidelity.values, stats.std_fidelity.values)
    write_table(curves, curves_csv_path, ["t", "mean_F", "std_F"])
    peaks = [(k, v) for k, v in enumerate(stats.peak_fidelities)]
    write_table(peaks, peaks_csv_path, ["realization", "F_max"])
    if sidecar_path is not None:
        summary = dict(extras or {})
        summary.update({
            "delta": stats.delta,
            "n_samples": stats.n_samples,
            "mean_peak_fidelity": stats.mean_peak_fidelity,
            "std_peak_fidelity": stats.std_peak_fidelity,
        })
        write_sidecar(sidecar_path, summary)


def read_csv(path):
    """Parse a CSV written by this module back into a header and float columns.

    Empty cells come back as None, non-numeric cells as strings; used by the
    round-trip tests and handy for quick inspection.
    """
    with open(path) as handle:
        rows = [line.rstrip("\n").split(",") for line in handle if line.strip()]
    header, body = rows[0], rows[1:]
    columns = {name: [] for name in header}
    for row in body:
        for name, cell in zip(header, row):
            if cell == "":
                columns[name].append(None)
            else:
                try:
                    columns[name].append(float(cell))
                except ValueError:
                    columns[name].append(cell)
    return header, columns


def read_sidecar(path):
    with open(path) as handle:
        return json.load(handle)
