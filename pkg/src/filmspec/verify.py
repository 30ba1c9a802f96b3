"""Property and oracle suites for every inequality the analysis supplies.

Each check returns a :class:`CheckReport` whose ``worst_margin`` is positive
exactly when the property held on every trial; failing checks carry a
replayable witness.  All checks are deterministic functions of their seed
and trial count.

The free constants of the gradient estimates are not pinned by the theory;
the ones used here are derived from the integration-by-parts proofs:

* ``|grad w|_{L2}^2  <= (2 pi)^(N/2) |w|_{A0} |w|_{H2}``
  (one integration by parts, Cauchy-Schwarz, |w|_Linf <= |w|_A0),
* ``|grad w|_{L4}^2  <= 3 |w|_{A0} |w|_{H2}``
  (pointwise Cauchy-Schwarz in the index pairs; the Frobenius norm of the
  Hessian equals the Laplacian's L^2 norm on the torus),
* ``|grad w|_{L4}^2  <= 3 |w|_{L2} |w|_{A2}``
  (same splitting, sup-norm factors bounded through the A^2 seminorm).

Both L^4 constants are dimension-independent; the L^2 constant carries the
torus volume through Cauchy-Schwarz.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from .analysis import delta1, delta2
from .model import (
    G_closed,
    ModelParams,
    rhs_convolution_oracle,
    rhs_pseudospectral,
    rhs_series,
)
from .spectral import (
    Grid,
    SpectralField,
    field_from_modes,
    inverse_transform,
    linf_norm,
    padded_samples,
    sobolev_norm,
    wiener_seminorm,
)

#: Relative tolerance for the delta-series cross-check.
DELTA_SERIES_RTOL = 1e-8

#: Number of series terms summed by the delta oracle.
DELTA_SERIES_TERMS = 10_000

GRADIENT_L4_CONSTANT = 3.0
GRADIENT_L42_CONSTANT = 3.0


@dataclass(frozen=True)
class CheckReport:
    """Outcome of one property check.

    ``worst_margin >= 0`` iff the property held everywhere, in which case
    ``witness`` is empty; otherwise ``witness`` serializes the failing input.
    """

    name: str
    trials: int
    worst_margin: float
    witness: str = ""
    header: str = ""

    def __post_init__(self):
        if (self.worst_margin >= 0) != (self.witness == ""):
            raise ValueError("witness must be present exactly when the margin is negative")

    @property
    def ok(self) -> bool:
        return self.worst_margin >= 0

    def as_json(self) -> str:
        return json.dumps(
            {
                "name": self.name,
                "trials": self.trials,
                "worst_margin": self.worst_margin,
                "witness": self.witness,
                "header": self.header,
            }
        )


def random_field(grid: Grid, a0_norm: float, seed: int, rho: float = 0.5,
                 k_cut: int | None = None) -> SpectralField:
    """Smooth random zero-mean field with ``|vhat(k)|`` proportional to ``rho^|k|``.

    Phases are uniform; the result is rescaled to the requested A^0 norm.
    The support stays within ``|k_j| <= k_cut`` (default: a third of the
    band), so the resolution guard of the evaluators passes by construction.
    """
    rng = np.random.default_rng(seed)
    m = grid.points_per_axis
    half = m // 3 if k_cut is None else min(k_cut, m // 2 - 1)
    entries = []
    if grid.dim == 1:
        reps = [(k,) for k in range(1, half + 1)]
    else:
        reps = [(k1, k2) for k1 in range(0, half + 1) for k2 in range(-half, half + 1)]
        reps = [k for k in reps if k > (0, 0)]      # one of each Hermitian pair
    for k in sorted(reps):
        amp = rho ** float(np.sqrt(sum(x * x for x in k)))
        phase = rng.uniform(0.0, 2.0 * np.pi)
        entries.append((k, amp, phase))
    field = field_from_modes(grid, entries)
    current = wiener_seminorm(field, 0.0)
    return field * (a0_norm / current)


def _relative_margin(bound: float, value: float) -> float:
    # a zero bound only ever pairs with a zero value (the zero field)
    if bound == 0.0:
        return 0.0 if value <= 0.0 else -np.inf
    return (bound - value) / bound


def _margin_report(name, trials, margins, witnesses, header=""):
    worst = int(np.argmin(margins))
    worst_margin = float(margins[worst])
    witness = "" if worst_margin >= 0 else json.dumps(witnesses[worst])
    return CheckReport(name, trials, worst_margin, witness, header)


def check_interpolation(trials: int, seed: int, grid: Grid | None = None,
                        pairs=((1, 4), (2, 4), (3, 4), (2, 3))) -> CheckReport:
    """``|v|_{A^p} <= |v|_{A^0}^(1-p/q) |v|_{A^q}^(p/q)`` on random fields.

    Margin per trial: ``min over pairs of (rhs - lhs)/rhs``.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    grid = grid or Grid(1, 64)
    margins, witnesses = [], []
    for trial in range(trials):
        field = random_field(grid, a0_norm=0.5, seed=seed + trial)
        worst = np.inf
        for p, q in pairs:
            lhs = wiener_seminorm(field, float(p))
            rhs = wiener_seminorm(field, 0.0) ** (1 - p / q) * wiener_seminorm(field, float(q)) ** (p / q)
            worst = min(worst, (rhs - lhs) / rhs)
        margins.append(worst)
        witnesses.append({"seed": seed + trial, "grid": [grid.dim, grid.points_per_axis]})
    return _margin_report("interpolation", trials, margins, witnesses,
                          header=f"pairs={list(pairs)}")


def gradient_lemma_constants(dim: int) -> tuple[float, float, float]:
    """Derived constants ``(L2, L4, L42)`` for the three gradient estimates."""
    return ((2.0 * np.pi) ** (dim / 2.0), GRADIENT_L4_CONSTANT, GRADIENT_L42_CONSTANT)


def gradient_norms(field: SpectralField) -> tuple[float, float]:
    """``(|grad w|_{L2}, |grad w|_{L4})`` with the L^4 norm integrated on a
    doubly oversampled lattice (its integrand is quartic in the field)."""
    grid = field.grid
    grad_sq_l2 = grid.measure * float(np.sum(grid.k_squared * np.abs(field.coeffs) ** 2))
    m = grid.points_per_axis
    grad_sq = 0.0
    for axis in range(grid.dim):
        k_axis = grid.mode_axis.astype(float).copy()
        k_axis[m // 2] = 0.0
        shape = [1] * grid.dim
        shape[axis] = m
        comp = padded_samples((1j * k_axis.reshape(shape)) * field.coeffs, grid, factor=2.0)
        grad_sq = grad_sq + comp * comp
    l4_fourth = grid.measure * float(np.mean(grad_sq ** 2))
    return float(np.sqrt(grad_sq_l2)), float(l4_fourth ** 0.25)


def check_gradient_lemma(trials: int, seed: int, grid: Grid | None = None,
                         constants: tuple[float, float, float] | None = None) -> CheckReport:
    """The three gradient estimates with the derived constants.

    Passing explicit ``constants`` overrides the derived ones (used to probe
    how much slack they carry; too-small values produce a witnessed failure).
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    grid = grid or Grid(1, 64)
    c_l2, c_l4, c_l42 = constants if constants is not None else gradient_lemma_constants(grid.dim)
    header = (
        f"derived constants: |grad w|_L2^2 <= {c_l2:.6g} |w|_A0 |w|_H2; "
        f"|grad w|_L4^2 <= {c_l4:.6g} |w|_A0 |w|_H2; "
        f"|grad w|_L4^2 <= {c_l42:.6g} |w|_L2 |w|_A2"
    )
    margins, witnesses = [], []
    for trial in range(trials):
        field = random_field(grid, a0_norm=0.5, seed=seed + trial)
        gl2, gl4 = gradient_norms(field)
        a0 = wiener_seminorm(field, 0.0)
        a2 = wiener_seminorm(field, 2.0)
        l2 = sobolev_norm(field, 0.0)
        h2 = sobolev_norm(field, 2.0)
        bounds = (c_l2 * a0 * h2, c_l4 * a0 * h2, c_l42 * l2 * a2)
        values = (gl2 ** 2, gl4 ** 2, gl4 ** 2)
        worst = min(_relative_margin(b, v) for b, v in zip(bounds, values))
        margins.append(worst)
        witnesses.append({"seed": seed + trial, "grid": [grid.dim, grid.points_per_axis],
                          "constants": [c_l2, c_l4, c_l42]})
    return _margin_report("gradient_lemma", trials, margins, witnesses, header=header)


def check_norm_ordering(trials: int, seed: int, grid: Grid | None = None) -> CheckReport:
    """``|v|_{A^a} <= |v|_{A^b}`` for ``a <= b`` on zero-mean fields."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    grid = grid or Grid(1, 64)
    margins, witnesses = [], []
    for trial in range(trials):
        field = random_field(grid, a0_norm=0.5, seed=seed + trial)
        norms = [wiener_seminorm(field, a) for a in (0.0, 1.0, 2.0, 3.0, 4.0)]
        worst = min(
            (hi - lo) / hi for lo, hi in zip(norms[:-1], norms[1:])
        )
        margins.append(worst)
        witnesses.append({"seed": seed + trial})
    return _margin_report("norm_ordering", trials, margins, witnesses)


def check_linf_embedding(trials: int, seed: int, grid: Grid | None = None) -> CheckReport:
    """``|v|_{L^inf} <= |v|_{A^0}`` on random fields."""
    if trials < 1:
        raise ValueError("trials must be at least 1")
    grid = grid or Grid(1, 64)
    margins, witnesses = [], []
    for trial in range(trials):
        field = random_field(grid, a0_norm=0.5, seed=seed + trial)
        a0 = wiener_seminorm(field, 0.0)
        margins.append((a0 - linf_norm(field)) / a0)
        witnesses.append({"seed": seed + trial})
    return _margin_report("linf_embedding", trials, margins, witnesses)


def check_rhs_equivalence(trials: int, seed: int, n_trunc: int = 60,
                          s_max: float = 0.2, grid: Grid | None = None,
                          kmax: int = 2, oracle_n: int = 6,
                          oracle_tol: float = 1e-10) -> CheckReport:
    """Cross-evaluator agreement of the right-hand side.

    Random fields with ``|v|_{A^0} <= s_max`` are fed to the closed-form and
    series evaluators (tolerance ``1e-8 * (1 + |v|_{A^4})``); small-support
    fields additionally go through the convolution oracle at ``oracle_tol``.
    Margins are tolerance minus observed A^0 discrepancy.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    if not 0 < s_max < 1:
        raise ValueError("s_max must lie in (0, 1)")
    grid = grid or Grid(1, 128)
    params = ModelParams(c1=0.5, c2=1.0, n_trunc=n_trunc)
    margins, witnesses = [], []
    for trial in range(trials):
        field = random_field(grid, a0_norm=s_max, seed=seed + trial)
        ps = rhs_pseudospectral(field, params)
        sr = rhs_series(field, params)
        diff = wiener_seminorm(ps.total - sr.total, 0.0)
        tol = 1e-8 * (1.0 + wiener_seminorm(field, 4.0))
        margins.append(tol - diff)
        witnesses.append({"seed": seed + trial, "part": "pseudospectral_vs_series"})

    oracle_params = ModelParams(c1=params.c1, c2=params.c2, n_trunc=oracle_n)
    rng = np.random.default_rng(seed)
    for trial in range(min(trials, 8)):
        amps = rng.uniform(0.02, 0.08, size=2)
        phases = rng.uniform(0.0, 2 * np.pi, size=2)
        modes = [((1,) * grid.dim, amps[0], phases[0]), ((kmax,) + (0,) * (grid.dim - 1), amps[1], phases[1])]
        field = field_from_modes(grid, modes)
        sr = rhs_series(field, oracle_params)
        oracle = rhs_convolution_oracle(field, oracle_params, kmax=kmax)
        diff = wiener_seminorm(sr.total - oracle, 0.0)
        margins.append(oracle_tol - diff)
        witnesses.append({"seed": seed, "trial": trial, "part": "series_vs_convolution"})
    return _margin_report("rhs_equivalence", trials, margins, witnesses,
                          header=f"n_trunc={n_trunc} s_max={s_max} kmax={kmax} oracle_n={oracle_n}")


def delta_series_sums(s: float, c1: float, c2: float,
                      terms: int = DELTA_SERIES_TERMS) -> tuple[float, float]:
    """Numerically summed family bounds grouped by the seminorm they weight.

    Family absolute-coefficient bounds (prefactor times ``s``-power):

        group A4: [c1 + (r+1) c2] s^r (r>=1),
                  3 [c1 (r+1) + c2 (r+2)(r+1)] s^(r+1) (r>=0),
                  [c1 (r+2)(r+1) + c2 (r+3)(r+2)(r+1)] s^(r+2) (r>=0)
        group A2: [c1 (r+2)(r+1) + c2 (r+3)(r+2)(r+1)] s^r (r>=1),
                  [c1 (r+3)(r+2)(r+1) + c2 (r+4)(r+3)(r+2)(r+1)] s^(r+1) (r>=0)

    The two grouped totals equal ``delta1(s)`` and ``delta2(s)``.
    """
    r = np.arange(terms + 1, dtype=float)
    sr = s ** r
    p1 = r + 1.0
    p2 = (r + 2.0) * p1
    p3 = (r + 3.0) * p2
    p4 = (r + 4.0) * p3
    fam0 = np.sum(((c1 + p1 * c2) * sr)[1:])
    fam1 = 3.0 * s * np.sum((c1 * p1 + c2 * p2) * sr)
    fam2 = s * s * np.sum((c1 * p2 + c2 * p3) * sr)
    fam3 = np.sum(((c1 * p2 + c2 * p3) * sr)[1:])
    fam4 = s * np.sum((c1 * p3 + c2 * p4) * sr)
    return float(fam0 + fam1 + fam2), float(fam3 + fam4)


def check_delta_series(samples=None) -> CheckReport:
    """Grouped series sums against the closed forms of ``delta1``/``delta2``.

    Default sample grid: 10 x 10 x 10 over ``s in [0, 0.3]``,
    ``c1, c2 in [0.1, 2]``.  Margin: relative tolerance minus the worst
    relative error.
    """
    if samples is None:
        s_grid = np.linspace(0.0, 0.3, 10)
        c_grid = np.linspace(0.1, 2.0, 10)
        samples = [(s, c1, c2) for s in s_grid for c1 in c_grid for c2 in c_grid]
    margins, witnesses = [], []
    for s, c1, c2 in samples:
        sum1, sum2 = delta_series_sums(s, c1, c2)
        d1 = float(delta1(s, c1, c2))
        d2 = float(delta2(s, c1, c2))
        err = 0.0
        for total, closed in ((sum1, d1), (sum2, d2)):
            if closed == 0.0 and total == 0.0:
                continue
            err = max(err, abs(total - closed) / abs(closed))
        margins.append(DELTA_SERIES_RTOL - err)
        witnesses.append({"s": s, "c1": c1, "c2": c2})
    return _margin_report("delta_series", len(samples), margins, witnesses,
                          header=f"terms={DELTA_SERIES_TERMS} rtol={DELTA_SERIES_RTOL}")


def check_positivity(c1: float, c2: float, v_max: float = 4.0,
                     tol: float = 1e-8) -> CheckReport:
    """Dense scan of ``1 + G`` on ``[0, v_max]`` against the closed minimum.

    The interior minimum sits at ``v = 2 c2/c1 - 1`` with value
    ``1 - c1^2/(4 c2)``; positivity there is equivalent to ``c2 > c1^2/4``.
    The scan is refined by bounded minimization, so it stays an independent
    route to the closed formula.  Boundary equality is flagged in the header.
    """
    if v_max <= 0:
        raise ValueError("v_max must be positive")
    params = ModelParams(c1=c1, c2=c2, n_trunc=0)
    vs = np.linspace(0.0, v_max, 4001)
    values = 1.0 + G_closed(vs, params)
    i_min = int(np.argmin(values))
    lo = vs[max(0, i_min - 1)]
    hi = vs[min(len(vs) - 1, i_min + 1)]
    if hi > lo:
        res = minimize_scalar(lambda v: 1.0 + G_closed(v, params), bounds=(lo, hi),
                              method="bounded", options={"xatol": 1e-13})
        v_scan, min_scan = float(res.x), float(res.fun)
    else:
        v_scan, min_scan = float(vs[i_min]), float(values[i_min])
    if float(values[0]) < min_scan:
        v_scan, min_scan = 0.0, float(values[0])

    v_star = 2.0 * c2 / c1 - 1.0
    min_formula = 1.0 - c1 * c1 / (4.0 * c2)
    boundary = abs(c2 - c1 * c1 / 4.0) <= 1e-14 * max(1.0, c1 * c1)
    interior = 0.0 <= v_star <= v_max

    # the value is checked at tol; the minimizer of a quadratic floor cannot
    # be located better than sqrt(eps), so the location check takes sqrt(tol)
    loc_tol = max(np.sqrt(tol), 1e-6)
    discrepancies = []
    if interior:
        discrepancies.append(abs(min_scan - min_formula))
        discrepancies.append(abs(v_scan - v_star) * (tol / loc_tol))
    positive_scan = min_scan > 0.0
    positive_formula = c2 > c1 * c1 / 4.0
    consistent = boundary or (positive_scan == positive_formula) or not interior

    worst = tol - max(discrepancies) if discrepancies else tol
    if not consistent:
        worst = -1.0
    header = (
        f"min(1+G) = {min_scan:.12g} at v = {v_scan:.12g}; "
        f"formula {min_formula:.12g} at v = {v_star:.12g}; "
        f"positivity {'holds' if positive_formula else 'fails'} (c2 vs c1^2/4)"
    )
    if boundary:
        header += "; boundary equality case: min(1+G) = 0"
    witness = "" if worst >= 0 else json.dumps({"c1": c1, "c2": c2, "v_max": v_max})
    return CheckReport("positivity", len(vs), float(worst), witness, header)
