"""Exponential time differencing for the film equation.

The stiff linear symbol is integrated exactly; the nonlinearity enters
through the phi functions of a second-order exponential Runge-Kutta pair
(first-order predictor, second-order corrector).  The difference between
the two stages doubles as the local error estimate for an adaptive PI
step-size controller keyed to the relative A^0 error.

Per-step monitors record every quantity the analysis bounds: the Wiener
seminorms A^0/A^2/A^4, L^2, H^2, L^inf, the spatial mean, the running
trapezoidal accumulation of |v|_{H^4}^2, and the exponential decay
envelope whenever the smallness margins are positive.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from pathlib import Path
from typing import NamedTuple

import numpy as np

from . import snapshots
from .analysis import BoundSet, decay_envelope, smallness_margins
from .model import GuardError, ModelParams, linear_symbol_grid, rhs_pseudospectral, rhs_series
from .spectral import (
    Grid,
    SpectralField,
    field_from_modes,
    norm_vector,
    sobolev_norm,
    wiener_seminorm,
)

#: Taylor/closed-form switch point for the phi functions.
PHI_TAYLOR_CUTOFF = 1e-4

#: Multiplicative slack granted to the decay envelope by discretization.
ENVELOPE_SLACK = 1.01

#: Absolute slack added to the decay envelope.
ENVELOPE_ABS_TOL = 1e-12

#: Default relative tolerance for the H^2 energy bound monitor.
ENERGY_H2_SLACK = 1e-2

_EVENT_CAP_PER_KIND = 100


def phi1(z: np.ndarray) -> np.ndarray:
    """``(exp(z) - 1)/z`` with a series branch near zero."""
    return _phi(z, 1)


def phi2(z: np.ndarray) -> np.ndarray:
    """``(exp(z) - 1 - z)/z^2`` with a series branch near zero."""
    return _phi(z, 2)


def _phi(z: np.ndarray, order: int) -> np.ndarray:
    z = np.asarray(z, dtype=float)
    out = np.empty_like(z)
    small = np.abs(z) < PHI_TAYLOR_CUTOFF
    zs = z[small]
    # 8-term Taylor: phi_m(z) = sum_j z^j / (j + m)!
    acc = np.zeros_like(zs)
    for j in range(7, -1, -1):
        acc = acc * zs + 1.0 / _factorial(j + order)
    out[small] = acc
    zl = z[~small]
    with np.errstate(over="ignore", under="ignore"):
        ez = np.exp(zl)
        if order == 1:
            out[~small] = (ez - 1.0) / zl
        else:
            out[~small] = (ez - 1.0 - zl) / (zl * zl)
    return out


def _factorial(n: int) -> float:
    out = 1.0
    for i in range(2, n + 1):
        out *= i
    return out


@dataclass(frozen=True)
class Tolerances:
    """Step acceptance and guard thresholds."""

    step_tol: float = 1e-7
    pole_guard: float = 1e-6
    resolution_guard: float = 1e-8

    def __post_init__(self):
        if self.step_tol <= 0:
            raise ValueError("step_tol must be positive")


@dataclass(frozen=True)
class SimConfig:
    """Everything a simulation needs.

    ``initial`` may be a :class:`SpectralField`, a list of
    ``(k, amplitude, phase)`` mode entries, or a path to a FILMv1 snapshot.
    ``rhs_mode`` selects the evaluator: ``"pseudospectral"``, ``"series"``,
    or ``"linear"`` (nonlinearity forced to zero; exact stepping, test mode).
    """

    grid: Grid
    params: ModelParams
    initial: object
    t_end: float
    dt_init: float = 1e-4
    dt_min: float = 1e-12
    dt_max: float = 0.05
    rhs_mode: str = "pseudospectral"
    monitor_stride: int = 1
    tolerances: Tolerances = dc_field(default_factory=Tolerances)
    adaptive: bool = True
    check_decay: bool = True
    snapshot_times: tuple = ()
    snapshot_dir: object = None
    safety: float = 0.9
    growth_cap: float = 2.0

    def __post_init__(self):
        if not 0 < self.dt_min <= self.dt_init <= self.dt_max:
            raise ValueError("need 0 < dt_min <= dt_init <= dt_max")
        if self.t_end <= 0:
            raise ValueError("t_end must be positive")
        if self.monitor_stride < 1:
            raise ValueError("monitor_stride must be at least 1")
        if self.rhs_mode not in ("pseudospectral", "series", "linear"):
            raise ValueError(f"unknown rhs_mode {self.rhs_mode!r}")


@dataclass
class NormSeries:
    """Time-indexed record of the monitored norms.

    ``h4_sq_integral`` accumulates ``integral |v|_{H^4}^2 dt`` by the
    trapezoid rule over monitor times; ``envelope`` holds the decay bound
    where the smallness condition holds and NaN elsewhere.
    """

    times: list = dc_field(default_factory=list)
    a0: list = dc_field(default_factory=list)
    a2: list = dc_field(default_factory=list)
    a4: list = dc_field(default_factory=list)
    l2: list = dc_field(default_factory=list)
    h2: list = dc_field(default_factory=list)
    linf: list = dc_field(default_factory=list)
    mean: list = dc_field(default_factory=list)
    envelope: list = dc_field(default_factory=list)
    h4_sq_integral: list = dc_field(default_factory=list)
    _last_h4_sq: float = 0.0

    COLUMNS = ("t", "A0", "A2", "A4", "L2", "H2", "Linf", "mean", "envelope", "H4_sq_integral")

    def append(self, t: float, field: SpectralField, envelope_value: float):
        nv = norm_vector(field)
        h4_sq = sobolev_norm(field, 4.0) ** 2
        if self.times:
            accumulated = self.h4_sq_integral[-1] + 0.5 * (t - self.times[-1]) * (
                h4_sq + self._last_h4_sq
            )
        else:
            accumulated = 0.0
        self.times.append(t)
        self.a0.append(nv.a0)
        self.a2.append(nv.a2)
        self.a4.append(nv.a4)
        self.l2.append(nv.l2)
        self.h2.append(nv.h2)
        self.linf.append(nv.linf)
        self.mean.append(nv.mean)
        self.envelope.append(envelope_value)
        self.h4_sq_integral.append(accumulated)
        self._last_h4_sq = h4_sq

    def rows(self):
        for i in range(len(self.times)):
            yield (
                self.times[i], self.a0[i], self.a2[i], self.a4[i], self.l2[i],
                self.h2[i], self.linf[i], self.mean[i], self.envelope[i],
                self.h4_sq_integral[i],
            )

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            fh.write(",".join(self.COLUMNS) + "\n")
            for row in self.rows():
                fh.write(",".join(repr(float(x)) for x in row) + "\n")


@dataclass(frozen=True)
class Event:
    t: float
    kind: str
    detail: str


class SimResult(NamedTuple):
    final: SpectralField
    series: NormSeries
    events: list


STOP_KINDS = ("guard_stop", "blow_up", "dt_underflow")


def stopped_early(events) -> bool:
    return any(ev.kind in STOP_KINDS for ev in events)


def _nonlinear(field: SpectralField, lsym: np.ndarray, params: ModelParams,
               rhs_mode: str, tol: Tolerances) -> np.ndarray:
    if rhs_mode == "linear":
        return np.zeros_like(field.coeffs)
    if rhs_mode == "series":
        rhs = rhs_series(field, params, pole_guard=tol.pole_guard,
                         resolution_guard=tol.resolution_guard)
    else:
        rhs = rhs_pseudospectral(field, params, pole_guard=tol.pole_guard,
                                 resolution_guard=tol.resolution_guard)
    return rhs.total.coeffs - lsym * field.coeffs


def _etd_step(field, dt, lsym, params, rhs_mode, tol):
    """One predictor/corrector exponential step.

    Returns ``(second order field, A^0 norm of the correction)``; the
    correction is the embedded error estimate of the first-order stage.
    """
    z = lsym * dt
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        expz = np.exp(z)
        p1 = phi1(z)
        p2 = phi2(z)
        n0 = _nonlinear(field, lsym, params, rhs_mode, tol)
        predictor = SpectralField(field.grid, expz * field.coeffs + dt * p1 * n0)
        n1 = _nonlinear(predictor, lsym, params, rhs_mode, tol)
        correction = dt * p2 * (n1 - n0)
        corrected = SpectralField(field.grid, predictor.coeffs + correction)
    err = wiener_seminorm(SpectralField(field.grid, correction), 0.0)
    return corrected, err


def step(v: SpectralField, dt: float, params: ModelParams,
         rhs_mode: str = "pseudospectral",
         tolerances: Tolerances = Tolerances()) -> SpectralField:
    """Advance one exponential step of size ``dt``; the k = 0 mode never moves."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    lsym = linear_symbol_grid(v.grid, params)
    out, _ = _etd_step(v, dt, lsym, params, rhs_mode, tolerances)
    if not np.all(np.isfinite(out.coeffs)):
        raise GuardError("non-finite coefficients after step (blow-up)")
    return out


def resolve_initial(config: SimConfig) -> SpectralField:
    initial = config.initial
    if isinstance(initial, SpectralField):
        field = initial
    elif isinstance(initial, (str, Path)):
        field, _ = snapshots.read_snapshot_field(initial)
    else:
        field = field_from_modes(config.grid, initial)
    if field.grid != config.grid:
        raise ValueError(
            f"initial field grid {field.grid} does not match configured grid {config.grid}"
        )
    if abs(field.mean) > 1e-10:
        raise ValueError(f"initial data must be zero-mean, found mean {field.mean:.3e}")
    return field


def simulate(config: SimConfig) -> SimResult:
    """Advance to ``t_end`` with monitoring; events record guard trips,
    envelope violations, energy-bound violations, and early stops.

    The run is deterministic: identical configs produce bit-identical
    series.  On dt underflow or a guard trip the last good state is
    returned together with the triggering event.
    """
    tol = config.tolerances
    v = resolve_initial(config)
    lsym = linear_symbol_grid(config.grid, config.params)
    events: list[Event] = []
    event_counts: dict = {}

    def emit(t, kind, detail):
        event_counts[kind] = event_counts.get(kind, 0) + 1
        if event_counts[kind] <= _EVENT_CAP_PER_KIND:
            events.append(Event(t, kind, detail))

    s0 = wiener_seminorm(v, 0.0)
    bounds: BoundSet | None = None
    if config.check_decay:
        if s0 < 1.0:
            bounds = smallness_margins(s0, config.params.c1, config.params.c2)
        else:
            emit(0.0, "decay_check_disabled", f"|v0|_A0 = {s0:.4f} >= 1")
    envelope_active = bounds is not None and bounds.cond_smallness

    def envelope_at(t):
        if not envelope_active:
            return float("nan")
        return float(decay_envelope(t, s0, bounds.D1, bounds.D2))

    series = NormSeries()
    series.append(0.0, v, envelope_at(0.0))
    h2_limit = series.h2[0] * (1.0 + ENERGY_H2_SLACK)

    snapshot_times = sorted(config.snapshot_times)
    snap_idx = 0
    written_snaps = []

    def maybe_snapshot(t, field):
        nonlocal snap_idx
        if config.snapshot_dir is None:
            return
        while snap_idx < len(snapshot_times) and snapshot_times[snap_idx] <= t + 1e-15:
            path = Path(config.snapshot_dir) / f"snapshot_{snap_idx:04d}.film"
            snapshots.write_snapshot(path, field, t)
            written_snaps.append(str(path))
            snap_idx += 1

    maybe_snapshot(0.0, v)

    def monitor(t, field):
        env = envelope_at(t)
        series.append(t, field, env)
        if envelope_active and series.a0[-1] > ENVELOPE_SLACK * env + ENVELOPE_ABS_TOL:
            emit(t, "envelope_violation",
                 f"|v|_A0 = {series.a0[-1]:.6e} above {ENVELOPE_SLACK} * envelope = {env:.6e}")
        if envelope_active and series.h2[-1] > h2_limit:
            emit(t, "energy_violation",
                 f"|v|_H2 = {series.h2[-1]:.6e} above bound {h2_limit:.6e}")

    t = 0.0
    dt = config.dt_init
    rel_prev = None
    accepted = 0
    t_final = config.t_end

    while t < t_final * (1.0 - 1e-14):
        dt_try = min(dt, t_final - t)
        try:
            candidate, err = _etd_step(v, dt_try, lsym, config.params, config.rhs_mode, tol)
        except GuardError as exc:
            emit(t, "guard_stop", str(exc))
            break
        if not np.all(np.isfinite(candidate.coeffs)):
            emit(t, "blow_up", f"non-finite coefficients at dt = {dt_try:.3e}")
            break
        scale = max(wiener_seminorm(candidate, 0.0), wiener_seminorm(v, 0.0), 1e-300)
        rel = err / scale

        if config.adaptive and rel > tol.step_tol:
            if dt_try <= config.dt_min * (1.0 + 1e-12):
                emit(t, "dt_underflow",
                     f"relative error {rel:.3e} > {tol.step_tol:.1e} at dt_min")
                break
            shrink = max(0.1, min(0.5, config.safety * (tol.step_tol / rel) ** 0.35))
            dt = max(config.dt_min, dt_try * shrink)
            continue

        t += dt_try
        v = candidate
        accepted += 1
        if config.adaptive:
            if rel > 0.0:
                fac = config.safety * (tol.step_tol / rel) ** 0.35
                if rel_prev is not None and rel_prev > 0.0:
                    fac *= (rel_prev / rel) ** 0.2
            else:
                fac = config.growth_cap
            fac = min(config.growth_cap, max(0.2, fac))
            dt = min(config.dt_max, max(config.dt_min, dt * fac))
            rel_prev = rel if rel > 0 else rel_prev
        if accepted % config.monitor_stride == 0 or t >= t_final * (1.0 - 1e-14):
            monitor(t, v)
        maybe_snapshot(t, v)

    if series.times[-1] < t:
        monitor(t, v)          # last good state, whether or not the run completed

    events.extend(
        Event(t, kind, f"suppressed {count - _EVENT_CAP_PER_KIND} further events")
        for kind, count in event_counts.items()
        if count > _EVENT_CAP_PER_KIND
    )
    return SimResult(v, series, events)


@dataclass(frozen=True)
class EnergyReport:
    """Summary of the H^2 / H^4 energy monitors over a run."""

    sup_h2: float
    h2_bound: float
    h2_ok: bool
    h4_sq_integral: float
    integral_nondecreasing: bool
    finite: bool


def monitor_energy(series: NormSeries, h2_bound: float | None = None) -> EnergyReport:
    """Report ``sup_t |v|_H2`` and the accumulated ``integral |v|_H4^2 dt``.

    Default bound: the initial H^2 norm with one percent slack (the
    monotone-decay regime of compliant runs).
    """
    if not series.times:
        raise ValueError("series is empty")
    h2 = np.asarray(series.h2)
    integral = np.asarray(series.h4_sq_integral)
    if h2_bound is None:
        h2_bound = float(h2[0]) * (1.0 + ENERGY_H2_SLACK)
    sup_h2 = float(np.max(h2))
    return EnergyReport(
        sup_h2=sup_h2,
        h2_bound=float(h2_bound),
        h2_ok=bool(sup_h2 <= h2_bound),
        h4_sq_integral=float(integral[-1]),
        integral_nondecreasing=bool(np.all(np.diff(integral) >= -1e-300)),
        finite=bool(np.all(np.isfinite(integral)) and np.all(np.isfinite(h2))),
    )
