"""Named, seeded, reproducible experiment drivers.

Every study is a plain function from parameters to tabular results:
reference trajectory, field sweep, anisotropy heatmap, disorder ensemble,
size scaling, effective-model comparison, and the carrier-frequency table.
All drivers stream the evolved states in chunks, so long windows at large
field never hold the full state history in memory.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from .errors import InsufficientDataError, InvalidArgumentError, UnsupportedSizeError
from .evolution import TimeGrid, diagonalize, iter_evolved
from .lattice import (
    LadderParams,
    build_hamiltonian,
    build_initial_state,
    dressed_gap,
    leg_bonds,
    pauli_string,
)
from .metrics import BELL_STATES, _concurrence_many, _entropy_many, _fidelity_many
from .signals import FitResult, TimeSeries, envelope_period, dominant_frequency, extract_alpha, \
    effective_coupling_from_period, loglog_fit

#: Reference sampling of t in [0, 10].
DEFAULT_GRID = TimeGrid(0.0, 10.0, 4001)

#: A-priori prefactor used only to size simulation windows for slow-envelope
#: studies (window = window_factor * NOMINAL_SLOW_PREFACTOR * h / J^2). The
#: measured prefactor at the reference anisotropies comes out larger (close
#: to pi), and the first envelope maximum sits near pi*h/2, so the default
#: 1.2 safety factor still covers it comfortably.
NOMINAL_SLOW_PREFACTOR = 2.37

#: Carrier sampling density for envelope studies: grid steps per fast period.
POINTS_PER_CARRIER = 200


def pair_label(i, j):
    """CSV-safe rung-pair label: '56' for sites (5, 6), '9_10' for (9, 10)."""
    return f"{i}{j}" if j < 10 else f"{i}_{j}"


def rung_pairs(n_rungs):
    return [(2 * n - 1, 2 * n) for n in range(1, n_rungs + 1)]


@dataclass(frozen=True)
class Trajectory:
    """Per-pair concurrence, terminal fidelity, optional mutual information."""

    grid: TimeGrid
    pair_concurrence: dict
    fidelity_terminal: TimeSeries
    mutual_info: dict = None

    def __post_init__(self):
        for label, series in self.pair_concurrence.items():
            if series.values.min() < -1e-9 or series.values.max() > 1.0 + 1e-9:
                raise InvalidArgumentError(f"concurrence series {label} leaves [0, 1]")
        fid = self.fidelity_terminal.values
        if fid.min() < -1e-9 or fid.max() > 1.0 + 1e-9:
            raise InvalidArgumentError("fidelity series leaves [0, 1]")

    @property
    def terminal_label(self):
        return list(self.pair_concurrence)[-1]


@dataclass(frozen=True)
class DisorderRealization:
    """Per-bond coupling deltas for one ensemble member."""

    seed: int
    rung_deltas: np.ndarray
    leg_deltas: np.ndarray


@dataclass(frozen=True)
class EnsembleStats:
    delta: float
    n_samples: int
    mean_fidelity: TimeSeries
    std_fidelity: TimeSeries
    peak_fidelities: np.ndarray
    mean_peak_fidelity: float
    std_peak_fidelity: float


@dataclass(frozen=True)
class HeatmapGrid:
    g_values: np.ndarray
    d_values: np.ndarray
    f_max: np.ndarray  # shape (len(g_values), len(d_values))


@dataclass(frozen=True)
class SweepRow:
    h: float
    t_slow: float
    f_max: float
    flag: str = None


@dataclass(frozen=True)
class SweepResult:
    rows: list
    fit: FitResult = None


@dataclass(frozen=True)
class EffectiveCheckRow:
    h: float
    t_slow_full: float
    j_eff: float
    alpha: float
    t_slow_effective: float
    relative_error: float


@dataclass(frozen=True)
class FrequencyRow:
    d: float
    predicted: float
    measured: float
    ratio: float


def _reduced_many(states, keep, n_sites):
    """Reduced density matrices for a block of states (columns), one per time."""
    nt = states.shape[1]
    psi = states.T.reshape([nt] + [2] * n_sites)
    rest = [k for k in range(1, n_sites + 1) if k not in keep]
    block = psi.transpose([0] + list(keep) + rest).reshape(nt, 2 ** len(keep), -1)
    return np.einsum("tim,tjm->tij", block, block.conj())


def _trajectory_from_decomp(decomp, psi0, grid, n_sites, pairs, want_mi=False, chunk=2048):
    times = grid.times
    n_points = grid.n_points
    conc = {pair: np.empty(n_points) for pair in pairs}
    fid = np.empty(n_points)
    terminal = pairs[-1]
    first = pairs[0]
    phi = BELL_STATES["phi_plus"]
    if want_mi:
        mi = {name: np.empty(n_points) for name in ("first", "terminal", "joint")}
    pos = 0
    for _, states in iter_evolved(decomp, psi0, times, chunk=chunk):
        nt = states.shape[1]
        sl = slice(pos, pos + nt)
        rho_cache = {}
        for pair in pairs:
            rhos = _reduced_many(states, list(pair), n_sites)
            rho_cache[pair] = rhos
            conc[pair][sl] = _concurrence_many(rhos)
        fid[sl] = _fidelity_many(rho_cache[terminal], phi)
        if want_mi:
            singles = {
                site: _entropy_many(_reduced_many(states, [site], n_sites))
                for site in (*first, *terminal)
            }
            s_first = _entropy_many(rho_cache[first])
            s_term = _entropy_many(rho_cache[terminal])
            s_joint = _entropy_many(_reduced_many(states, [*first, *terminal], n_sites))
            mi["first"][sl] = singles[first[0]] + singles[first[1]] - s_first
            mi["terminal"][sl] = singles[terminal[0]] + singles[terminal[1]] - s_term
            mi["joint"][sl] = s_first + s_term - s_joint
        pos += nt

    pair_series = {
        pair_label(*pair): TimeSeries(times, np.clip(conc[pair], 0.0, 1.0))
        for pair in pairs
    }
    mi_series = None
    if want_mi:
        lf, lt = pair_label(*first), pair_label(*terminal)
        mi_series = {
            f"I{lf}": TimeSeries(times, mi["first"]),
            f"I{lt}": TimeSeries(times, mi["terminal"]),
            f"I{lf}_{lt}": TimeSeries(times, mi["joint"]),
        }
    return Trajectory(
        grid=grid,
        pair_concurrence=pair_series,
        fidelity_terminal=TimeSeries(times, np.clip(fid, 0.0, 1.0)),
        mutual_info=mi_series,
    )


def run_reference(params=None, state_kind="phi_plus", grid=None, include_mutual_info=True,
                  rung_factors=None, leg_factors=None, include_odd_leg=True):
    """Evolve one ladder and record every rung pair's concurrence plus terminal fidelity.

    Mutual-information channels (first rung, terminal rung, and the joint
    first-terminal correlation) are included by default; they roughly double
    the per-point cost.
    """
    params = LadderParams() if params is None else params
    grid = DEFAULT_GRID if grid is None else grid
    ham = build_hamiltonian(params, rung_factors=rung_factors, leg_factors=leg_factors,
                            include_odd_leg=include_odd_leg)
    decomp = diagonalize(ham)
    psi0 = build_initial_state(state_kind, params)
    return _trajectory_from_decomp(decomp, psi0, grid, params.n_sites,
                                   rung_pairs(params.n_rungs), want_mi=include_mutual_info)


def scaling_run(n_rungs, base=None, grid=None):
    """Reference-style run at a different ladder length, all pair channels, no MI.

    Dense diagonalization bounds the size: n_rungs above 5 (dimension 1024)
    is refused rather than silently slow.
    """
    if n_rungs > 5:
        raise UnsupportedSizeError(f"n_rungs = {n_rungs} exceeds the dense-diagonalization bound of 5")
    if n_rungs < 3:
        raise InvalidArgumentError(f"a scaling run needs at least one mediating rung, got n_rungs = {n_rungs}")
    base = LadderParams() if base is None else base
    params = base.replace(n_rungs=int(n_rungs))
    return run_reference(params, grid=DEFAULT_GRID if grid is None else grid,
                         include_mutual_info=False)


def _envelope_grid(params, t_end, points_per_carrier=POINTS_PER_CARRIER):
    dt = 2.0 * math.pi / dressed_gap(params) / points_per_carrier
    return TimeGrid(0.0, t_end, int(round(t_end / dt)) + 1)


def _slow_window(params, window_factor):
    j = abs(params.j_parallel)
    if params.h > 0 and j > 0:
        return window_factor * NOMINAL_SLOW_PREFACTOR * params.h / j ** 2
    return 10.0


def sweep_field(h_values, base=None, window_factor=1.2, points_per_carrier=POINTS_PER_CARRIER,
                min_prominence=0.05):
    """Slow period and peak fidelity per field value, plus the log-log fit.

    Each field value gets its own carrier-resolving grid spanning at least
    1.2 nominal slow periods. Rows whose envelope extraction fails are kept
    and flagged rather than dropped. The fit runs over the unflagged rows
    with h > 0 when at least three remain; its alpha field carries the
    prefactor extracted from the largest such field, where the strong-field
    expansion is cleanest.
    """
    base = LadderParams() if base is None else base
    rows = []
    for h in h_values:
        params = base.replace(h=float(h))
        grid = _envelope_grid(params, _slow_window(params, window_factor), points_per_carrier)
        traj = _terminal_only(params, grid)
        c_term = traj.pair_concurrence[traj.terminal_label]
        f_max = float(traj.fidelity_terminal.values.max())
        try:
            t_slow = envelope_period(c_term, min_prominence)
            rows.append(SweepRow(h=float(h), t_slow=t_slow, f_max=f_max))
        except InsufficientDataError as exc:
            rows.append(SweepRow(h=float(h), t_slow=None, f_max=f_max, flag=str(exc)))
    fit = None
    good = [r for r in rows if r.flag is None and r.h > 0]
    if len(good) >= 3:
        fit = loglog_fit([r.h for r in good], [r.t_slow for r in good])
        top = max(good, key=lambda r: r.h)
        alpha = extract_alpha(top.t_slow, base.replace(h=top.h))
        fit = replace(fit, alpha=alpha)
    return SweepResult(rows=rows, fit=fit)


def _terminal_only(params, grid):
    decomp = diagonalize(build_hamiltonian(params))
    psi0 = build_initial_state("phi_plus", params)
    terminal = rung_pairs(params.n_rungs)[-1]
    return _trajectory_from_decomp(decomp, psi0, grid, params.n_sites, [terminal])


def anisotropy_heatmap(g_values, d_values, base=None, grid=None):
    """Peak terminal fidelity over a (g, d) grid; cells are independent runs."""
    base = LadderParams() if base is None else base
    grid = DEFAULT_GRID if grid is None else grid
    g_values = np.asarray(g_values, dtype=float)
    d_values = np.asarray(d_values, dtype=float)
    f_max = np.empty((len(g_values), len(d_values)))
    for i, g in enumerate(g_values):
        for j, d in enumerate(d_values):
            traj = _terminal_only(base.replace(g=float(g), d=float(d)), grid)
            f_max[i, j] = traj.fidelity_terminal.values.max()
    return HeatmapGrid(g_values=g_values, d_values=d_values, f_max=f_max)


def disorder_realization(delta, base_seed, k, n_rungs):
    """Bond deltas for ensemble member k, drawn from a per-member child stream.

    The child generator is seeded with SeedSequence((base_seed, k)), so any
    member can be regenerated independently of execution order. Draw order:
    rung bonds 1..N first, then leg bonds in leg_bonds() order (top leg,
    then bottom), one uniform draw from [-delta, +delta] each.
    """
    seq = np.random.SeedSequence((int(base_seed), int(k)))
    rng = np.random.default_rng(seq)
    deltas = rng.uniform(-delta, delta, size=n_rungs + 2 * (n_rungs - 1))
    return DisorderRealization(
        seed=int(seq.generate_state(1)[0]),
        rung_deltas=deltas[:n_rungs],
        leg_deltas=deltas[n_rungs:],
    )


def disorder_ensemble(delta, n_samples, base_seed, base=None, grid=None):
    """Terminal-fidelity statistics over independent coupling-disorder realizations.

    Every rung and leg bond is scaled by (1 + delta_k) independently; the
    field h is left clean. Aggregation is by realization index, so results
    are bitwise reproducible for a fixed base seed.
    """
    if delta < 0:
        raise InvalidArgumentError(f"delta must be >= 0, got {delta}")
    if n_samples < 1:
        raise InvalidArgumentError(f"n_samples must be >= 1, got {n_samples}")
    base = LadderParams() if base is None else base
    grid = DEFAULT_GRID if grid is None else grid
    times = grid.times
    psi0 = build_initial_state("phi_plus", base)
    terminal = rung_pairs(base.n_rungs)[-1]
    phi = BELL_STATES["phi_plus"]

    # Welford accumulation: the naive sum-of-squares variance loses ~8 digits
    # near F = 1 and would report nonzero spread for a delta = 0 ensemble.
    mean = np.zeros(grid.n_points)
    m2 = np.zeros(grid.n_points)
    peaks = np.empty(n_samples)
    for k in range(n_samples):
        real = disorder_realization(delta, base_seed, k, base.n_rungs)
        ham = build_hamiltonian(base, rung_factors=1.0 + real.rung_deltas,
                                leg_factors=1.0 + real.leg_deltas)
        decomp = diagonalize(ham)
        fid = np.empty(grid.n_points)
        pos = 0
        for _, states in iter_evolved(decomp, psi0, times):
            rhos = _reduced_many(states, list(terminal), base.n_sites)
            fid[pos:pos + states.shape[1]] = _fidelity_many(rhos, phi)
            pos += states.shape[1]
        shift = fid - mean
        mean += shift / (k + 1)
        m2 += shift * (fid - mean)
        peaks[k] = fid.max()

    var = m2 / n_samples
    return EnsembleStats(
        delta=float(delta),
        n_samples=int(n_samples),
        mean_fidelity=TimeSeries(times, mean),
        std_fidelity=TimeSeries(times, np.sqrt(var)),
        peak_fidelities=peaks,
        mean_peak_fidelity=float(peaks.mean()),
        std_peak_fidelity=float(peaks.std()),
    )


def build_effective_hamiltonian(j_eff, params):
    """Four-spin terminal-pair model: two dressed rungs joined by a weak rail exchange.

    Sites (1, 2) are the first rung and (3, 4) the terminal rung. Each keeps
    its full rung bond; the mediating rungs are reduced to their two static
    imprints on the terminal physics: the Ising part of the leg bonds acts
    as a field -d*j_parallel*sz per terminal site (each terminal site has
    one frozen mediating neighbour with <sz> = -1), and the second-order
    virtual exchange becomes the rail coupling -j_eff (sx1 sx3 + sx2 sx4).
    Without the sz dressing the model misses the carrier gap and detunes
    the transfer entirely, so it is not optional.
    """
    n = 4
    ham = np.zeros((16, 16), dtype=complex)
    for (i, j) in ((1, 2), (3, 4)):
        ham += params.j_perp * (
            0.5 * (1.0 + params.g) * pauli_string("xx", [i, j], n)
            + 0.5 * (1.0 - params.g) * pauli_string("yy", [i, j], n)
            + params.d * pauli_string("zz", [i, j], n)
        )
    ham -= j_eff * (pauli_string("xx", [1, 3], n) + pauli_string("xx", [2, 4], n))
    for site in range(1, 5):
        ham -= params.d * params.j_parallel * pauli_string("z", [site], n)
    return ham


def effective_model_check(base=None, h_values=(100.0, 200.0, 400.0), window_factor=1.2,
                          points_per_carrier=POINTS_PER_CARRIER, min_prominence=0.05):
    """Envelope period of the full ladder vs the four-spin effective model.

    For each field value the full simulation fixes the measured slow period;
    the coupling mapped from that period drives the effective model over the
    same window, and the two extracted periods are compared. Because the
    coupling is taken from the full run, the residual error reflects how
    consistently the envelope extractor reads both signals, not a physics
    gap between the models.
    """
    base = LadderParams() if base is None else base
    rows = []
    eff_proto = LadderParams(n_rungs=2, j_perp=base.j_perp, j_parallel=base.j_parallel,
                             g=base.g, d=base.d, h=0.0, field_mask=frozenset())
    for h in h_values:
        params = base.replace(h=float(h))
        grid = _envelope_grid(params, _slow_window(params, window_factor), points_per_carrier)
        full = _terminal_only(params, grid)
        t_full = envelope_period(full.pair_concurrence[full.terminal_label], min_prominence)
        j_eff = effective_coupling_from_period(t_full, params)
        alpha = extract_alpha(t_full, params)

        decomp = diagonalize(build_effective_hamiltonian(j_eff, params))
        psi0 = build_initial_state("phi_plus", eff_proto)
        eff = _trajectory_from_decomp(decomp, psi0, grid, 4, [(3, 4)])
        t_eff = envelope_period(eff.pair_concurrence["34"], min_prominence)
        rows.append(EffectiveCheckRow(
            h=float(h), t_slow_full=t_full, j_eff=j_eff, alpha=alpha,
            t_slow_effective=t_eff,
            relative_error=abs(t_eff - t_full) / t_full,
        ))
    return rows


def frequency_table(d_values, base=None, t_end=40.0, n_points=8001):
    """Measured carrier frequency of the terminal concurrence vs the dressed-gap prediction."""
    base = LadderParams() if base is None else base
    rows = []
    for d in d_values:
        params = base.replace(d=float(d))
        traj = _terminal_only(params, TimeGrid(0.0, t_end, n_points))
        measured = dominant_frequency(traj.pair_concurrence[traj.terminal_label])
        predicted = dressed_gap(params)
        rows.append(FrequencyRow(d=float(d), predicted=predicted, measured=measured,
                                 ratio=measured / predicted))
    return rows
