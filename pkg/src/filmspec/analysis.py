"""Closed-form analysis of the film equation.

Everything here is scalar arithmetic: nondimensionalization of the physical
model, the parameter conditions for existence/regularity, the smallness
margins ``D1``/``D2`` built from the series bounds ``delta1``/``delta2``,
the linear dispersion relation, and the exponential decay envelope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

import numpy as np


@dataclass(frozen=True)
class PhysicalParams:
    """Dimensional inputs of the film model (CGS units).

    ``u0_mass`` is the mean initial film height (cm); it may be zero, which
    degenerates the thickness rescaling to a pure division by ``g0``.
    """

    d: float            # length parameter (cm)
    V: float            # atomic volume (cm^3)
    g0: float           # surface energy (erg/cm^2)
    M_mob: float        # surface mobility (cm s / g)
    c1_phys: float      # attractive wetting energy (erg/cm^2)
    c2_phys: float      # repulsive wetting energy (erg/cm^2)
    u0_mass: float      # mean initial film height (cm)

    def __post_init__(self):
        for name in ("d", "V", "g0", "M_mob", "c1_phys", "c2_phys"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be strictly positive")
        if self.u0_mass < 0:
            raise ValueError("u0_mass must be nonnegative")


@dataclass(frozen=True)
class Nondimensional:
    """Dimensionless coefficients plus the space/time scales that produced them."""

    c1: float
    c2: float
    x_scale: float   # cm per dimensionless length unit
    t_scale: float   # s per dimensionless time unit


def nondimensionalize(p: PhysicalParams) -> Nondimensional:
    """Reduce physical parameters to the dimensionless pair ``(c1, c2)``.

    The height unit is ``d + u0_mass``, the length unit is ``d`` and the
    time unit is ``d^4 / (V * M_mob * g0)``.
    """
    ratio = p.d / (p.d + p.u0_mass)
    return Nondimensional(
        c1=ratio * p.c1_phys / p.g0,
        c2=ratio ** 2 * p.c2_phys / p.g0,
        x_scale=p.d,
        t_scale=p.d ** 4 / (p.V * p.M_mob * p.g0),
    )


@dataclass(frozen=True)
class ConditionReport:
    ok: bool
    margins: dict


def check_conditions(c1: float, c2: float, mode: str) -> ConditionReport:
    """Parameter conditions for the two main results.

    ``existence`` requires ``c2 > max(c1 - 1, c1/3)``; ``regularity``
    additionally requires ``c2 > c1^2/4`` (strict positivity of ``1 + G``).
    Margins are ``c2 - bound`` per inequality; all must be positive.
    """
    if c1 <= 0 or c2 <= 0:
        raise ValueError("c1 and c2 must be strictly positive")
    margins = {
        "c1_minus_1": c2 - (c1 - 1.0),
        "c1_over_3": c2 - c1 / 3.0,
    }
    if mode == "regularity":
        margins["c1_sq_over_4"] = c2 - c1 * c1 / 4.0
    elif mode != "existence":
        raise ValueError(f"mode must be 'existence' or 'regularity', got {mode!r}")
    return ConditionReport(ok=all(v > 0 for v in margins.values()), margins=margins)


def delta1(s, c1: float, c2: float):
    """First series-bound constant; strictly increasing in ``s`` on [0, 1).

    delta1(s) = s * [ c1/(1-s) + (c2 (2-s) + 3 c1)/(1-s)^2
                      + 2 (3 c2 + c1 s)/(1-s)^3 + 6 c2 s/(1-s)^4 ].
    """
    s = _check_s(s)
    u = 1.0 - s
    return s * (
        c1 / u
        + (c2 * (2.0 - s) + 3.0 * c1) / u ** 2
        + 2.0 * (3.0 * c2 + c1 * s) / u ** 3
        + 6.0 * c2 * s / u ** 4
    )


def delta2(s, c1: float, c2: float):
    """Second series-bound constant; strictly increasing in ``s`` on [0, 1).

    delta2(s) = s * [ 2 c1 (3 - 3s + s^2)/(1-s)^3
                      + 6 (c2 (4 - 6s + 4s^2 - s^3) + c1)/(1-s)^4
                      + 24 c2/(1-s)^5 ].
    """
    s = _check_s(s)
    u = 1.0 - s
    return s * (
        2.0 * c1 * (3.0 - 3.0 * s + s * s) / u ** 3
        + 6.0 * (c2 * (4.0 - 6.0 * s + 4.0 * s * s - s ** 3) + c1) / u ** 4
        + 24.0 * c2 / u ** 5
    )


def _check_s(s):
    s = np.asarray(s, dtype=float)
    if np.any(s < 0) or np.any(s >= 1):
        raise ValueError("initial-size parameter s must lie in [0, 1)")
    return s if s.ndim else float(s)


@dataclass(frozen=True)
class BoundSet:
    """Smallness margins and condition flags for one ``(s0, c1, c2)``."""

    s0: float
    delta1: float
    delta2: float
    D1: float
    D2: float
    cond_existence: bool
    cond_regularity: bool
    cond_smallness: bool

    def as_dict(self) -> dict:
        return asdict(self)

    @property
    def decay_rate(self) -> float:
        return self.D1 + self.D2


def smallness_margins(s0: float, c1: float, c2: float) -> BoundSet:
    """Evaluate ``D1 = 1 + c2 - c1 - delta1`` and ``D2 = 2(3 c2 - c1) - delta2``.

    ``cond_smallness`` is true exactly when both margins are positive; the
    decay envelope rate is ``D1 + D2``.
    """
    d1 = float(delta1(s0, c1, c2))
    d2 = float(delta2(s0, c1, c2))
    big_d1 = 1.0 + c2 - c1 - d1
    big_d2 = 2.0 * (3.0 * c2 - c1) - d2
    return BoundSet(
        s0=float(s0),
        delta1=d1,
        delta2=d2,
        D1=big_d1,
        D2=big_d2,
        cond_existence=check_conditions(c1, c2, "existence").ok,
        cond_regularity=check_conditions(c1, c2, "regularity").ok,
        cond_smallness=bool(big_d1 > 0 and big_d2 > 0),
    )


def decay_envelope(t, s0: float, D1: float, D2: float):
    """Exponential envelope ``s0 * exp(-(D1 + D2) t)``."""
    t = np.asarray(t, dtype=float)
    out = s0 * np.exp(-(D1 + D2) * t)
    return out if out.ndim else float(out)


def dispersion(k, c1: float, c2: float) -> float:
    """Growth rate of the linearized equation at lattice vector ``k``.

    ``lambda(k) = -(1 + c2 - c1) |k|^4 - 2 (3 c2 - c1) |k|^2``.
    """
    k = np.atleast_1d(np.asarray(k, dtype=float))
    k2 = float(np.sum(k * k))
    return -(1.0 + c2 - c1) * k2 * k2 - 2.0 * (3.0 * c2 - c1) * k2


def max_growth(c1: float, c2: float, kmax: int, dim: int = 1) -> tuple[tuple[int, ...], float]:
    """Largest dispersion rate over nonzero lattice vectors with ``|k_j| <= kmax``.

    Returns ``(k*, lambda*)``; ties resolve to the smallest ``|k|^2`` and then
    lexicographically, so the scan is deterministic.
    """
    if kmax < 1:
        raise ValueError("kmax must be at least 1")
    best_k, best_lam = None, -math.inf
    rng = range(-kmax, kmax + 1)
    candidates = [(k,) for k in rng] if dim == 1 else [(a, b) for a in rng for b in rng]
    # ties resolve to the smallest |k|^2, preferring nonnegative components
    for k in sorted(candidates, key=lambda k: (sum(x * x for x in k), tuple(-x for x in k))):
        if all(x == 0 for x in k):
            continue
        lam = dispersion(k, c1, c2)
        if lam > best_lam:
            best_k, best_lam = k, lam
    return best_k, best_lam


def khenner_threshold(p: PhysicalParams) -> float:
    """Critical uniform film height ``d (3 c2/c1 - 1)``.

    May be negative, meaning every positive film height sits on the same
    side of the threshold; callers report that rather than erroring.
    """
    return p.d * (3.0 * p.c2_phys / p.c1_phys - 1.0)


@dataclass(frozen=True)
class SeriesCheck:
    """Partial sums of the three power-series identities against their closed forms."""

    geometric_partial: float
    geometric_closed: float
    product_from0_partial: float
    product_from0_closed: float
    product_from1_partial: float
    product_from1_closed: float


def series_closed_forms(w: float, m: int, n_trunc: int) -> SeriesCheck:
    """Truncated sums of ``sum w^r`` and ``sum prod_{j=1..m}(r+j) w^r``.

    Closed forms: ``1/(1-w)``, ``m!/(1-w)^(m+1)`` (sum from r = 0) and
    ``m! (1-(1-w)^(m+1))/(1-w)^(m+1)`` (sum from r = 1).
    """
    if not 0.0 < w < 1.0:
        raise ValueError("w must lie in (0, 1)")
    if not 1 <= m <= 4:
        raise ValueError("m must be between 1 and 4")
    r = np.arange(n_trunc + 1, dtype=float)
    prod = np.ones_like(r)
    for j in range(1, m + 1):
        prod *= r + j
    powers = w ** r
    fact = float(math.factorial(m))
    u = 1.0 - w
    return SeriesCheck(
        geometric_partial=float(np.sum(powers)),
        geometric_closed=1.0 / u,
        product_from0_partial=float(np.sum(prod * powers)),
        product_from0_closed=fact / u ** (m + 1),
        product_from1_partial=float(np.sum(prod[1:] * powers[1:])),
        product_from1_closed=fact * (1.0 - u ** (m + 1)) / u ** (m + 1),
    )


def khenner_verdict(c1: float, c2: float) -> dict:
    """Side-by-side stability verdicts from the symbol and from the quoted threshold.

    The symbol verdict scans ``lambda(k)`` over resolved modes; the
    height-threshold criterion translates, at fixed dimensionless
    coefficients, into the sign of ``3 c2 - c1`` with the opposite
    orientation.  The two conventions can disagree; the flag records it
    without taking a side.
    """
    k_star, lam_star = max_growth(c1, c2, kmax=8, dim=1)
    symbol_stable = lam_star < 0
    threshold_stable = (3.0 * c2 - c1) < 0
    return {
        "symbol_stable": bool(symbol_stable),
        "symbol_lambda_max": float(lam_star),
        "symbol_k_max": list(k_star),
        "threshold_stable": bool(threshold_stable),
        "verdicts_disagree": bool(symbol_stable != threshold_stable),
    }
