"""Command-line entry point.

Subcommands: ``simulate``, ``conditions``, ``sweep``, ``verify``,
``dispersion``.  Exit codes: 0 success, 1 usage/config error, 2 runtime
guard stop.  ``FILMSPEC_THREADS`` caps the sweep worker count.

Report paths write delimited data (CSV/JSON) and render matplotlib figures
next to them unless ``--no-plot`` is given.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import (
    PhysicalParams,
    check_conditions,
    dispersion,
    khenner_verdict,
    max_growth,
    nondimensionalize,
    smallness_margins,
)
from .integrator import SimConfig, Tolerances, monitor_energy, simulate, stopped_early
from .model import ModelParams
from .spectral import Grid, SpectralField, field_from_modes, wiener_seminorm
from .verify import (
    check_delta_series,
    check_gradient_lemma,
    check_interpolation,
    check_linf_embedding,
    check_norm_ordering,
    check_positivity,
    check_rhs_equivalence,
    random_field,
)

CONVENTION = "vhat(k) = (2*pi)^-N * integral v(x) exp(-i k.x) dx; a cosine of amplitude a has A0 = a"

#: Cost cap for the cross-evaluator suite (each trial runs three evaluators).
RHS_TRIAL_CAP = 100


class ConfigError(ValueError):
    """Invalid configuration; carries the JSON path of the offending field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"config error at {path}: {message}")
        self.path = path


class _Parser(argparse.ArgumentParser):
    # usage errors must exit 1, not argparse's default 2
    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


# ---------------------------------------------------------------------------
# config parsing
# ---------------------------------------------------------------------------

def _want(doc: dict, path: str, key: str, kind, required: bool = True, default=None):
    if key not in doc:
        if required:
            raise ConfigError(f"{path}.{key}", "missing required field")
        return default
    value = doc[key]
    if kind is float and isinstance(value, (int, float)) and not isinstance(value, bool):
        return float(value)
    if kind is int and isinstance(value, int) and not isinstance(value, bool):
        return int(value)
    if kind is bool and isinstance(value, bool):
        return value
    if kind in (dict, list, str) and isinstance(value, kind):
        return value
    raise ConfigError(f"{path}.{key}", f"expected {kind.__name__}, got {type(value).__name__}")


def load_json(path) -> dict:
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise ConfigError("$", f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError("$", f"invalid JSON in {path}: {exc}")


def resolve_run_config(doc: dict) -> tuple[SimConfig, dict]:
    """Validate a run-config document and build a :class:`SimConfig`.

    Returns the config and a metadata dict (resolved document, scales).
    Accepts a run manifest as well, in which case the embedded config is
    used verbatim (re-runs are bit-identical).
    """
    if doc.get("kind") == "filmspec-run-manifest":
        doc = _want(doc, "$", "config", dict)
    grid_doc = _want(doc, "$", "grid", dict)
    grid = _build(lambda: Grid(
        dim=_want(grid_doc, "$.grid", "dim", int),
        points_per_axis=_want(grid_doc, "$.grid", "points_per_axis", int),
    ), "$.grid")

    has_params = "params" in doc
    has_physical = "physical" in doc
    if has_params == has_physical:
        raise ConfigError("$.params", "exactly one of 'params' and 'physical' must be present")
    scales = None
    if has_params:
        pd = _want(doc, "$", "params", dict)
        params = _build(lambda: ModelParams(
            c1=_want(pd, "$.params", "c1", float),
            c2=_want(pd, "$.params", "c2", float),
            n_trunc=_want(pd, "$.params", "n_trunc", int, required=False, default=60),
        ), "$.params")
    else:
        pd = _want(doc, "$", "physical", dict)
        phys = _build(lambda: PhysicalParams(
            d=_want(pd, "$.physical", "d", float),
            V=_want(pd, "$.physical", "V", float),
            g0=_want(pd, "$.physical", "g0", float),
            M_mob=_want(pd, "$.physical", "M_mob", float),
            c1_phys=_want(pd, "$.physical", "c1_phys", float),
            c2_phys=_want(pd, "$.physical", "c2_phys", float),
            u0_mass=_want(pd, "$.physical", "u0_mass", float),
        ), "$.physical")
        nd = nondimensionalize(phys)
        params = ModelParams(
            c1=nd.c1, c2=nd.c2,
            n_trunc=_want(pd, "$.physical", "n_trunc", int, required=False, default=60),
        )
        scales = {"x_scale_cm": nd.x_scale, "t_scale_s": nd.t_scale,
                  "c1": nd.c1, "c2": nd.c2}

    initial_doc = _want(doc, "$", "initial", dict)
    initial = _resolve_initial(initial_doc, grid)

    tol_doc = _want(doc, "$", "tolerances", dict, required=False, default={})
    tolerances = _build(lambda: Tolerances(
        step_tol=_want(tol_doc, "$.tolerances", "step_tol", float, required=False, default=1e-7),
        pole_guard=_want(tol_doc, "$.tolerances", "pole_guard", float, required=False, default=1e-6),
        resolution_guard=_want(tol_doc, "$.tolerances", "resolution_guard", float,
                               required=False, default=1e-8),
    ), "$.tolerances")

    config = _build(lambda: SimConfig(
        grid=grid,
        params=params,
        initial=initial,
        t_end=_want(doc, "$", "t_end", float),
        dt_init=_want(doc, "$", "dt_init", float, required=False, default=1e-4),
        dt_min=_want(doc, "$", "dt_min", float, required=False, default=1e-12),
        dt_max=_want(doc, "$", "dt_max", float, required=False, default=0.05),
        rhs_mode=_want(doc, "$", "rhs_mode", str, required=False, default="pseudospectral"),
        monitor_stride=_want(doc, "$", "monitor_stride", int, required=False, default=1),
        tolerances=tolerances,
        adaptive=_want(doc, "$", "adaptive", bool, required=False, default=True),
        check_decay=_want(doc, "$", "check_decay", bool, required=False, default=True),
        snapshot_times=tuple(_want(doc, "$", "snapshot_times", list, required=False, default=[])),
    ), "$")
    return config, {"document": doc, "scales": scales}


def _build(factory, path):
    try:
        return factory()
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(path, str(exc))


def _resolve_initial(doc: dict, grid: Grid) -> SpectralField:
    keys = [k for k in ("modes", "snapshot", "random") if k in doc]
    if len(keys) != 1:
        raise ConfigError("$.initial", "exactly one of 'modes', 'snapshot', 'random' required")
    if keys[0] == "snapshot":
        from .snapshots import read_snapshot_field
        path = _want(doc, "$.initial", "snapshot", str)
        field = _build(lambda: read_snapshot_field(path)[0], "$.initial.snapshot")
        if field.grid != grid:
            raise ConfigError("$.initial.snapshot",
                              f"snapshot grid {field.grid} does not match configured grid")
        return field
    if keys[0] == "random":
        rd = _want(doc, "$.initial", "random", dict)
        return random_field(
            grid,
            a0_norm=_want(rd, "$.initial.random", "a0", float),
            seed=_want(rd, "$.initial.random", "seed", int),
            rho=_want(rd, "$.initial.random", "rho", float, required=False, default=0.5),
        )
    entries = []
    for i, mode in enumerate(_want(doc, "$.initial", "modes", list)):
        mpath = f"$.initial.modes[{i}]"
        if not isinstance(mode, dict):
            raise ConfigError(mpath, "each mode must be an object")
        k = mode.get("k")
        if isinstance(k, int):
            k = [k]
        if not isinstance(k, list) or not all(isinstance(x, int) for x in k):
            raise ConfigError(f"{mpath}.k", "mode index must be an int or list of ints")
        entries.append((
            tuple(k),
            _want(mode, mpath, "amplitude", float),
            _want(mode, mpath, "phase", float, required=False, default=0.0),
        ))
    return _build(lambda: field_from_modes(grid, entries), "$.initial.modes")


def config_hash(doc: dict) -> str:
    canonical = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


# ---------------------------------------------------------------------------
# simulate
# ---------------------------------------------------------------------------

def cmd_simulate(args) -> int:
    try:
        doc = load_json(args.config)
        config, meta = resolve_run_config(doc)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    config = dataclasses.replace(config, snapshot_dir=out)

    result = simulate(config)
    norms_path = out / "norms.csv"
    result.series.write_csv(norms_path)

    s0 = wiener_seminorm(result.final, 0.0)
    bounds = None
    initial_a0 = result.series.a0[0]
    if initial_a0 < 1.0:
        bounds = smallness_margins(initial_a0, config.params.c1, config.params.c2)
    energy = monitor_energy(result.series)

    figures = []
    if not args.no_plot:
        from .plots import plot_norms
        fig_path = out / "norms.png"
        plot_norms(result.series, fig_path)
        figures.append(str(fig_path))

    guard_stop = stopped_early(result.events)
    manifest = {
        "kind": "filmspec-run-manifest",
        "version": 1,
        "tool_version": __version__,
        "convention": CONVENTION,
        "config": meta["document"],
        "config_sha256": config_hash(meta["document"]),
        "scales": meta["scales"],
        "params": {"c1": config.params.c1, "c2": config.params.c2,
                   "n_trunc": config.params.n_trunc},
        "bounds": bounds.as_dict() if bounds else None,
        "energy": {
            "sup_h2": energy.sup_h2,
            "h4_sq_integral": energy.h4_sq_integral,
            "h2_ok": energy.h2_ok,
        },
        "outputs": {
            "norms_csv": str(norms_path),
            "snapshots": sorted(str(p) for p in out.glob("snapshot_*.film")),
            "figures": figures,
        },
        "status": {
            "completed": not guard_stop,
            "t_final": result.series.times[-1],
            "final_a0": s0,
            "accepted_samples": len(result.series.times),
            "events": [{"t": ev.t, "kind": ev.kind, "detail": ev.detail}
                       for ev in result.events],
        },
    }
    manifest_path = out / "manifest.json"
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")

    if args.json:
        print(json.dumps(manifest, sort_keys=True))
    else:
        status = "guard stop" if guard_stop else "completed"
        print(f"# {CONVENTION}")
        print(f"{status}: t = {result.series.times[-1]:.6g}, |v|_A0 = {s0:.6e}, "
              f"{len(result.series.times)} monitor samples")
        for ev in result.events:
            print(f"event t={ev.t:.6g} {ev.kind}: {ev.detail}")
        print(f"wrote {norms_path} and {manifest_path}")
    return 2 if guard_stop else 0


# ---------------------------------------------------------------------------
# conditions
# ---------------------------------------------------------------------------

def cmd_conditions(args) -> int:
    if args.c1 <= 0 or args.c2 <= 0:
        print("c1 and c2 must be strictly positive", file=sys.stderr)
        return 1
    if not 0.0 <= args.s0 < 1.0:
        print(f"s0 must lie in [0, 1), got {args.s0}", file=sys.stderr)
        return 1
    bounds = smallness_margins(args.s0, args.c1, args.c2)
    existence = check_conditions(args.c1, args.c2, "existence")
    regularity = check_conditions(args.c1, args.c2, "regularity")
    khenner = khenner_verdict(args.c1, args.c2)
    payload = {
        "convention": CONVENTION,
        "c1": args.c1, "c2": args.c2, "s0": args.s0,
        "bounds": bounds.as_dict(),
        "decay_rate": bounds.decay_rate,
        "existence_margins": existence.margins,
        "regularity_margins": regularity.margins,
        "khenner": khenner,
    }
    if args.json:
        print(json.dumps(payload, sort_keys=True))
        return 0
    print(f"# {CONVENTION}")
    print(f"c1 = {args.c1!r}  c2 = {args.c2!r}  s0 = {args.s0!r}")
    print(f"delta1 = {bounds.delta1!r}")
    print(f"delta2 = {bounds.delta2!r}")
    print(f"D1 = {bounds.D1!r}")
    print(f"D2 = {bounds.D2!r}")
    print(f"decay rate D1+D2 = {bounds.decay_rate!r}")
    print(f"existence  (c2 > max(c1-1, c1/3)):        "
          f"{'PASS' if bounds.cond_existence else 'FAIL'}  margins={existence.margins}")
    print(f"regularity (c2 > max(c1-1, c1/3, c1^2/4)): "
          f"{'PASS' if bounds.cond_regularity else 'FAIL'}  margins={regularity.margins}")
    print(f"smallness  (D1 > 0 and D2 > 0):            "
          f"{'PASS' if bounds.cond_smallness else 'FAIL'}")
    side = "stable" if khenner["symbol_stable"] else "unstable"
    print(f"dispersion symbol: lambda_max = {khenner['symbol_lambda_max']!r} "
          f"at k = {khenner['symbol_k_max']} -> {side}")
    tside = "stable" if khenner["threshold_stable"] else "unstable"
    print(f"height-threshold criterion (sign of 3*c2 - c1): {tside}")
    if khenner["verdicts_disagree"]:
        print("NOTE: the two stability conventions disagree; both are reported verbatim.")
    return 0


# ---------------------------------------------------------------------------
# sweep
# ---------------------------------------------------------------------------

def _axis_values(doc: dict, path: str) -> list[float]:
    lo = _want(doc, path, "min", float)
    hi = _want(doc, path, "max", float)
    count = _want(doc, path, "count", int)
    spacing = _want(doc, path, "spacing", str, required=False, default="linear")
    if count < 1:
        raise ConfigError(f"{path}.count", "count must be at least 1")
    if lo > hi:
        raise ConfigError(f"{path}.min", "min must not exceed max")
    if count == 1:
        return [lo]
    if spacing == "linear":
        return [float(x) for x in np.linspace(lo, hi, count)]
    if spacing == "log":
        if lo <= 0:
            raise ConfigError(f"{path}.min", "log spacing requires min > 0")
        return [float(x) for x in np.geomspace(lo, hi, count)]
    raise ConfigError(f"{path}.spacing", f"unknown spacing {spacing!r}")


def _sweep_point(task: dict) -> dict:
    """Evaluate one grid point; a pure function, so worker scheduling is irrelevant."""
    c1, c2, s0 = task["c1"], task["c2"], task["s0"]
    bounds = smallness_margins(s0, c1, c2)
    k_star, lam_star = max_growth(c1, c2, kmax=task["kmax"], dim=1)
    row = {
        "index": task["index"], "c1": c1, "c2": c2, "s0": s0,
        "delta1": bounds.delta1, "delta2": bounds.delta2,
        "D1": bounds.D1, "D2": bounds.D2,
        "cond_existence": bounds.cond_existence,
        "cond_regularity": bounds.cond_regularity,
        "cond_smallness": bounds.cond_smallness,
        "lambda_max": lam_star, "k_max": ";".join(str(x) for x in k_star),
        "symbol_stable": lam_star < 0,
    }
    if task.get("decay"):
        row["decay_rate_measured"] = _measured_decay_rate(task)
    return row


def _measured_decay_rate(task: dict) -> float:
    d = task["decay"]
    grid = Grid(1, d["points_per_axis"])
    initial = random_field(grid, a0_norm=task["s0"], seed=task["index"], rho=d["rho"])
    config = SimConfig(
        grid=grid,
        params=ModelParams(task["c1"], task["c2"], d["n_trunc"]),
        initial=initial,
        t_end=d["t_end"],
    )
    result = simulate(config)
    a0 = np.asarray(result.series.a0)
    t = np.asarray(result.series.times)
    if stopped_early(result.events) or a0[-1] <= 0 or a0[0] <= 0:
        return float("nan")
    return float(-(math.log(a0[-1]) - math.log(a0[0])) / (t[-1] - t[0]))


SWEEP_COLUMNS = ("c1", "c2", "s0", "delta1", "delta2", "D1", "D2",
                 "cond_existence", "cond_regularity", "cond_smallness",
                 "lambda_max", "k_max", "symbol_stable")


def cmd_sweep(args) -> int:
    try:
        doc = load_json(args.config)
        c1_values = _axis_values(_want(doc, "$", "c1", dict), "$.c1")
        c2_values = _axis_values(_want(doc, "$", "c2", dict), "$.c2")
        s0_values = _axis_values(_want(doc, "$", "s0", dict), "$.s0")
        outputs = _want(doc, "$", "outputs", list, required=False,
                        default=["smallness", "dispersion"])
        kmax = _want(doc, "$", "kmax", int, required=False, default=8)
        for s0 in s0_values:
            if not 0.0 <= s0 < 1.0:
                raise ConfigError("$.s0", f"s0 grid value {s0} outside [0, 1)")
        decay = None
        if "decay" in outputs:
            dd = _want(doc, "$", "decay", dict, required=False, default={})
            decay = {
                "points_per_axis": _want(dd, "$.decay", "points_per_axis", int,
                                         required=False, default=64),
                "t_end": _want(dd, "$.decay", "t_end", float, required=False, default=0.5),
                "rho": _want(dd, "$.decay", "rho", float, required=False, default=0.5),
                "n_trunc": _want(dd, "$.decay", "n_trunc", int, required=False, default=60),
            }
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1

    tasks = []
    index = 0
    for c1 in c1_values:
        for c2 in c2_values:
            for s0 in s0_values:
                tasks.append({"index": index, "c1": c1, "c2": c2, "s0": s0,
                              "kmax": kmax, "decay": decay})
                index += 1

    jobs = max(1, args.jobs)
    cap = os.environ.get("FILMSPEC_THREADS")
    if cap is not None:
        jobs = max(1, min(jobs, int(cap)))
    if jobs == 1:
        rows = [_sweep_point(task) for task in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_sweep_point, tasks, chunksize=8))
    rows.sort(key=lambda row: row["index"])

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    columns = SWEEP_COLUMNS + (("decay_rate_measured",) if decay else ())
    csv_path = out / "sweep.csv"
    with open(csv_path, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for row in rows:
            fh.write(",".join(_csv_cell(row[c]) for c in columns) + "\n")

    figures = []
    if not args.no_plot:
        from .plots import plot_sweep
        fig_path = out / "smallness_region.png"
        plot_sweep(rows, c1_values, c2_values, s0_values[0], fig_path)
        figures.append(str(fig_path))

    if args.json:
        print(json.dumps({"rows": len(rows), "csv": str(csv_path), "figures": figures},
                         sort_keys=True))
    else:
        print(f"wrote {len(rows)} rows to {csv_path}")
    return 0


def _csv_cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def cmd_verify(args) -> int:
    if args.trials < 1:
        print(f"trials must be at least 1, got {args.trials}", file=sys.stderr)
        return 1
    suites = ("spectral", "model", "analysis")
    if args.suite != "all" and args.suite not in suites:
        print(f"unknown suite {args.suite!r} (choose from all, {', '.join(suites)})",
              file=sys.stderr)
        return 1
    grid = Grid(args.grid_dim, args.grid_size)
    constants = None
    if args.lemma_constants:
        try:
            parts = [float(x) for x in args.lemma_constants.split(",")]
            if len(parts) != 3:
                raise ValueError
            constants = tuple(parts)
        except ValueError:
            print("--lemma-constants expects three comma-separated floats", file=sys.stderr)
            return 1

    reports = []
    if args.suite in ("all", "spectral"):
        reports.append(check_interpolation(args.trials, args.seed, grid))
        reports.append(check_gradient_lemma(args.trials, args.seed, grid, constants=constants))
        reports.append(check_norm_ordering(args.trials, args.seed, grid))
        reports.append(check_linf_embedding(args.trials, args.seed, grid))
    if args.suite in ("all", "model"):
        reports.append(check_rhs_equivalence(min(args.trials, RHS_TRIAL_CAP), args.seed))
        reports.append(check_positivity(2.0, 1.01))
        reports.append(check_positivity(0.5, 1.0))
    if args.suite in ("all", "analysis"):
        reports.append(check_delta_series())

    for report in reports:
        print(report.as_json())
    return 0 if all(r.ok for r in reports) else 2


# ---------------------------------------------------------------------------
# dispersion
# ---------------------------------------------------------------------------

def cmd_dispersion(args) -> int:
    if args.c1 <= 0 or args.c2 <= 0:
        print("c1 and c2 must be strictly positive", file=sys.stderr)
        return 1
    ks = list(range(1, args.kmax + 1))
    lams = [dispersion((k,), args.c1, args.c2) for k in ks]
    k_star, lam_star = max_growth(args.c1, args.c2, args.kmax, dim=1)
    if args.json:
        print(json.dumps({"k": ks, "lambda": lams, "k_max": list(k_star),
                          "lambda_max": lam_star, "stable": lam_star < 0}, sort_keys=True))
    else:
        print("k,lambda")
        for k, lam in zip(ks, lams):
            print(f"{k},{lam!r}")
        print(f"# lambda_max = {lam_star!r} at k = {k_star} "
              f"({'stable' if lam_star < 0 else 'unstable'})")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        csv_path = out / "dispersion.csv"
        with open(csv_path, "w", newline="") as fh:
            fh.write("k,k_squared,lambda\n")
            for k, lam in zip(ks, lams):
                fh.write(f"{k},{k * k},{lam!r}\n")
        if not args.no_plot:
            from .plots import plot_dispersion
            plot_dispersion(ks, lams, out / "dispersion.png")
    return 0


# ---------------------------------------------------------------------------
# parser / entry
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="filmspec",
                     description="Pseudo-spectral toolkit for the fourth-order film equation")
    parser.add_argument("--version", action="version", version=f"filmspec {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one simulation from a JSON config")
    p.add_argument("--config", required=True, help="run config or run manifest (JSON)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--json", action="store_true", help="print the manifest to stdout")
    p.add_argument("--no-plot", action="store_true", help="skip figure rendering")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("conditions", help="parameter conditions and smallness margins")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--s0", type=float, required=True,
                   help="A0 norm of the initial data (mean height supplied separately)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_conditions)

    p = sub.add_parser("sweep", help="parameter sweep over (c1, c2, s0) grids")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--jobs", type=int, default=1,
                   help="worker processes (capped by FILMSPEC_THREADS)")
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", help="run the property/oracle check suites")
    p.add_argument("--suite", default="all", help="all, spectral, model, or analysis")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--trials", type=int, default=1000,
                   help="trials per inequality check (cross-evaluator suite capped at "
                        f"{RHS_TRIAL_CAP})")
    p.add_argument("--grid-dim", type=int, default=1)
    p.add_argument("--grid-size", type=int, default=64)
    p.add_argument("--lemma-constants", default=None,
                   help="override the derived gradient-estimate constants (L2,L4,L42)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("dispersion", help="linear growth rates over the integer lattice")
    p.add_argument("--c1", type=float, required=True)
    p.add_argument("--c2", type=float, required=True)
    p.add_argument("--kmax", type=int, default=8)
    p.add_argument("--out", default=None, help="optional output directory for CSV/figure")
    p.add_argument("--json", action="store_true")
    p.add_argument("--no-plot", action="store_true")
    p.set_defaults(func=cmd_dispersion)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return 1


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
