"""Wetting potential and right-hand-side evaluators for the film equation.

The dimensionless evolution law for the zero-mean height perturbation is

    dv/dt = -Lap^2 v - Lap( G(v) Lap v - G'(v) ),

with the rational wetting potential ``G(v) = -c1/(1+v) + c2/(1+v)^2``
(attraction plus short-range repulsion, both coefficients positive).

Three independent evaluators of the right-hand side are provided:

* :func:`rhs_pseudospectral` evaluates ``G`` and ``G'`` in closed form on a
  dealiased sample lattice; this is the limit object the series form
  converges to.
* :func:`rhs_series` evaluates the quasilinear form: exact linear part
  plus the power-series families of derivative monomials, truncated at
  ``n_trunc``.
* :func:`rhs_convolution_oracle` evaluates the same truncated series by
  literal lattice convolutions in coefficient space.  It never touches an
  FFT, which makes it an independent (if exponentially priced) oracle for
  the other two.

All evaluators project the k = 0 coefficient of their output to zero.  The
full right-hand side is a total Laplacian and carries no mean; the finite
series truncation re-introduces an O(|v|^(n+1)) spurious mean which the
projection removes, so mass conservation stays structural.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .analysis import dispersion
from .spectral import (
    Grid,
    SpectralField,
    padded_samples,
    spectrum_from_padded,
    wiener_seminorm,
    zero_field,
)

#: Default distance kept between ``1 + v`` and the potential's pole.
POLE_GUARD = 1e-6

#: Default cap on the relative spectral energy allowed in the top third of modes.
RESOLUTION_GUARD = 1e-8

#: Zero-padding factor for pointwise products (the classic 2/3 rule).
PAD_FACTOR = 1.5


class GuardError(RuntimeError):
    """A runtime guard tripped: pole proximity, resolution loss, or divergence."""


@dataclass(frozen=True)
class ModelParams:
    """Dimensionless coefficients plus the series truncation order."""

    c1: float
    c2: float
    n_trunc: int = 60

    def __post_init__(self):
        if self.c1 <= 0 or self.c2 <= 0:
            raise ValueError("c1 and c2 must be strictly positive")
        if self.n_trunc < 0:
            raise ValueError("n_trunc must be nonnegative")


@dataclass(frozen=True)
class RhsBreakdown:
    """Right-hand side split into linear and nonlinear contributions.

    ``total`` is the exact coefficient-space sum of the three parts.  The
    closed-form evaluator does not separate the linear Laplacian from its
    nonlinearity, so it reports ``linear_laplacian`` as the zero field.
    """

    linear_biharmonic: SpectralField
    linear_laplacian: SpectralField
    nonlinear: SpectralField
    total: SpectralField


def G_closed(v, params: ModelParams):
    """The wetting potential; pole at ``v = -1``."""
    return G_deriv(v, 0, params)


def G_deriv(v, p: int, params: ModelParams):
    """p-th derivative of the potential, 0 <= p <= 3.

    ``G^(p)(v) = (-1)^p p! [ -c1/(1+v)^(1+p) + (p+1) c2/(1+v)^(2+p) ]``.
    """
    if not 0 <= p <= 3:
        raise ValueError(f"derivative order p must be in 0..3, got {p}")
    v = np.asarray(v, dtype=float)
    if np.any(v <= -1.0):
        raise ValueError("potential evaluated at or beyond its pole (v <= -1)")
    w = 1.0 + v
    sign_fact = (-1.0) ** p * math.factorial(p)
    out = sign_fact * (-params.c1 / w ** (1 + p) + (p + 1) * params.c2 / w ** (2 + p))
    return out if out.ndim else float(out)


def G_truncated(v, params: ModelParams):
    """Polynomial truncation ``sum_{r=0}^{n} (-1)^r (-c1 + (r+1) c2) v^r``.

    Evaluated by Horner's rule; exact for every real ``v``.
    """
    v = np.asarray(v, dtype=float)
    acc = np.zeros_like(v)
    for r in range(params.n_trunc, -1, -1):
        coeff = (-1.0) ** r * (-params.c1 + (r + 1) * params.c2)
        acc = acc * v + coeff
    return acc if acc.ndim else float(acc)


def linear_symbol(k, params: ModelParams) -> float:
    """Fourier symbol of the exact linear part, ``lambda(k)``."""
    return dispersion(k, params.c1, params.c2)


def linear_symbol_grid(grid: Grid, params: ModelParams) -> np.ndarray:
    """The linear symbol evaluated on every resolved mode of ``grid``."""
    k2 = grid.k_squared
    return -(1.0 + params.c2 - params.c1) * k2 * k2 - 2.0 * (3.0 * params.c2 - params.c1) * k2


def series_coefficients(r: int, params: ModelParams, variant: str = "proof") -> tuple[float, ...]:
    """Coefficients of ``v^r`` in the five nonlinear monomial families.

    Family monomials (Einstein summation over j):

        0: v^r Lap^2 v          1: v^r (2 v,_j (Lap v),_j + (Lap v)^2)
        2: v^r |grad v|^2 Lap v 3: v^r Lap v
        4: v^r |grad v|^2

    Two derivations of the series circulate with different integer
    prefactors for families 1..4.  ``"proof"`` is the set consistent with
    term-by-term differentiation of the potential and with the
    ``delta1``/``delta2`` bounds; it drives the solver.  ``"intro"``
    preserves the alternative prefactors behind this flag for comparison.
    """
    c1, c2 = params.c1, params.c2
    if variant == "proof":
        return (
            -c1 + (r + 1) * c2,
            c1 * (r + 1) - c2 * (r + 2) * (r + 1),
            -c1 * (r + 2) * (r + 1) + c2 * (r + 3) * (r + 2) * (r + 1),
            -c1 * (r + 2) * (r + 1) + c2 * (r + 3) * (r + 2) * (r + 1),
            c1 * (r + 3) * (r + 2) * (r + 1) - c2 * (r + 4) * (r + 3) * (r + 2) * (r + 1),
        )
    if variant == "intro":
        return (
            -c1 + (r + 1) * c2,
            c1 * (r + 1) - 2.0 * c2 * (r + 2) * (r + 1),
            2.0 * (-c1 * (r + 2) * (r + 1) + 3.0 * c2 * (r + 3) * (r + 2) * (r + 1)),
            2.0 * (-c1 * (r + 2) * (r + 1) + 3.0 * c2 * (r + 3) * (r + 2) * (r + 1)),
            6.0 * (c1 * (r + 3) * (r + 2) * (r + 1) - 4.0 * c2 * (r + 4) * (r + 3) * (r + 2) * (r + 1)),
        )
    raise ValueError(f"unknown coefficient variant {variant!r}")


def check_resolution(field: SpectralField, guard: float = RESOLUTION_GUARD) -> float:
    """Relative spectral energy above two thirds of the band; raises past ``guard``."""
    grid = field.grid
    m = grid.points_per_axis
    energy = np.abs(field.coeffs) ** 2
    total = float(np.sum(energy))
    if total == 0.0:
        return 0.0
    sup_k = np.abs(grid.modes[0])
    for k in grid.modes[1:]:
        sup_k = np.maximum(sup_k, np.abs(k))
    fraction = float(np.sum(energy[sup_k > m / 3.0]) / total)
    if fraction > guard:
        raise GuardError(
            f"resolution guard: {fraction:.3e} of the spectral energy sits in the "
            f"top third of the band (limit {guard:.0e})"
        )
    return fraction


def _check_pole(v_samples: np.ndarray, guard: float):
    gap = 1.0 + float(np.min(v_samples))
    if gap <= guard:
        raise GuardError(f"pole guard: min(1 + v) = {gap:.3e} <= {guard:.0e}")


def _linear_fields(field: SpectralField, params: ModelParams) -> tuple[SpectralField, SpectralField]:
    grid = field.grid
    k2 = grid.k_squared
    biharmonic = SpectralField(grid, -(1.0 + params.c2 - params.c1) * k2 * k2 * field.coeffs)
    laplacian = SpectralField(grid, -2.0 * (3.0 * params.c2 - params.c1) * k2 * field.coeffs)
    return biharmonic, laplacian


def rhs_pseudospectral(
    field: SpectralField,
    params: ModelParams,
    pole_guard: float = POLE_GUARD,
    resolution_guard: float = RESOLUTION_GUARD,
) -> RhsBreakdown:
    """Closed-form evaluation of ``-Lap^2 v - Lap(G(v) Lap v - G'(v))``.

    ``G`` and ``G'`` are evaluated pointwise on a zero-padded lattice, the
    outer ``-Lap`` is applied in coefficient space.  The linear Laplacian is
    not split out of the nonlinearity here.
    """
    grid = field.grid
    check_resolution(field, resolution_guard)
    v = padded_samples(field.coeffs, grid, PAD_FACTOR)
    _check_pole(v, pole_guard)
    lap = padded_samples(grid.k_squared * -1.0 * field.coeffs, grid, PAD_FACTOR)
    flux = G_closed(v, params) * lap - G_deriv(v, 1, params)
    flux_hat = spectrum_from_padded(flux, grid)
    nl_coeffs = grid.k_squared * flux_hat          # -Lap in coefficient space
    nl_coeffs.flat[0] = 0.0
    nonlinear = SpectralField(grid, nl_coeffs)
    biharmonic = SpectralField(grid, -grid.k_squared ** 2 * field.coeffs)
    total = SpectralField(grid, biharmonic.coeffs + nonlinear.coeffs)
    return RhsBreakdown(biharmonic, zero_field(grid), nonlinear, total)


def rhs_series(
    field: SpectralField,
    params: ModelParams,
    variant: str = "proof",
    pole_guard: float = POLE_GUARD,
    resolution_guard: float = RESOLUTION_GUARD,
) -> RhsBreakdown:
    """Quasilinear evaluation: exact linear part plus truncated series.

    Requires ``|v|_{A^0} < 1`` for convergence of the underlying series.
    Monomials are formed pointwise on the padded lattice after spectral
    differentiation; the sum over powers runs ascending with compensated
    accumulation (the terms alternate in sign with growing prefactors).
    """
    grid = field.grid
    a0 = wiener_seminorm(field, 0.0)
    if a0 >= 1.0:
        raise GuardError(f"series guard: |v|_A0 = {a0:.6f} >= 1, series form diverges")
    check_resolution(field, resolution_guard)

    k2 = grid.k_squared
    v = padded_samples(field.coeffs, grid, PAD_FACTOR)
    _check_pole(v, pole_guard)
    lap = padded_samples(-k2 * field.coeffs, grid, PAD_FACTOR)
    bih = padded_samples(k2 * k2 * field.coeffs, grid, PAD_FACTOR)
    grads = []
    grad_laps = []
    m = grid.points_per_axis
    for axis in range(grid.dim):
        k_axis = grid.mode_axis.astype(float)
        k_axis = k_axis.copy()
        k_axis[m // 2] = 0.0                        # odd derivative: zero Nyquist
        shape = [1] * grid.dim
        shape[axis] = m
        ik = (1j * k_axis).reshape(shape)
        grads.append(padded_samples(ik * field.coeffs, grid, PAD_FACTOR))
        grad_laps.append(padded_samples(ik * -k2 * field.coeffs, grid, PAD_FACTOR))

    m1 = 2.0 * sum(g * gl for g, gl in zip(grads, grad_laps)) + lap * lap
    m4 = sum(g * g for g in grads)
    m2 = m4 * lap

    # Kahan-compensated ascending sum over the power index.
    acc = np.zeros_like(v)
    comp = np.zeros_like(v)
    power = np.ones_like(v)
    for r in range(params.n_trunc + 1):
        a0c, a1c, a2c, a3c, a4c = series_coefficients(r, params, variant)
        term = a1c * m1 + a2c * m2 - a4c * m4
        if r >= 1:
            term = term + a0c * bih - a3c * lap
        term = ((-1.0) ** r) * power * term
        y = term - comp
        t = acc + y
        comp = (t - acc) - y
        acc = t
        power = power * v

    nl_coeffs = -spectrum_from_padded(acc, grid)
    nl_coeffs.flat[0] = 0.0
    nonlinear = SpectralField(grid, nl_coeffs)
    biharmonic, laplacian = _linear_fields(field, params)
    total = SpectralField(grid, biharmonic.coeffs + laplacian.coeffs + nonlinear.coeffs)
    return RhsBreakdown(biharmonic, laplacian, nonlinear, total)


# ---------------------------------------------------------------------------
# FFT-free convolution oracle on sparse coefficient dictionaries.
# ---------------------------------------------------------------------------

def _field_to_dict(field: SpectralField, kmax: int) -> dict:
    spec = {}
    m = field.grid.points_per_axis
    axis = field.grid.mode_axis
    it = np.nditer(field.coeffs, flags=["multi_index"])
    for c in it:
        c = complex(c)
        if c == 0:
            continue
        k = tuple(int(axis[i]) for i in it.multi_index)
        if any(abs(ki) > kmax for ki in k):
            raise ValueError(
                f"support too large for the convolution oracle: mode {k} exceeds kmax={kmax}"
            )
        spec[k] = c
    return spec


def _conv(f: dict, g: dict) -> dict:
    out: dict = {}
    for ka, ca in f.items():
        for kb, cb in g.items():
            k = tuple(a + b for a, b in zip(ka, kb))
            out[k] = out.get(k, 0.0) + ca * cb
    return out


def _dict_combine(*weighted) -> dict:
    out: dict = {}
    for w, d in weighted:
        for k, c in d.items():
            out[k] = out.get(k, 0.0) + w * c
    return out


def rhs_convolution_oracle(
    field: SpectralField,
    params: ModelParams,
    kmax: int,
    variant: str = "proof",
) -> SpectralField:
    """Literal convolution-sum evaluation of the truncated quasilinear form.

    Works on sparse coefficient dictionaries; cost grows exponentially with
    the truncation order, so the support is capped at ``|k_j| <= kmax <= 4``.
    The result is truncated to the resolved band of the input grid.
    """
    if kmax > 4 or kmax < 1:
        raise ValueError(f"kmax must be in 1..4 for the convolution oracle, got {kmax}")
    a0 = wiener_seminorm(field, 0.0)
    if a0 >= 1.0:
        raise GuardError(f"series guard: |v|_A0 = {a0:.6f} >= 1")
    v = _field_to_dict(field, kmax)

    def ksq(k):
        return float(sum(x * x for x in k))

    lap = {k: -ksq(k) * c for k, c in v.items()}
    bih = {k: ksq(k) ** 2 * c for k, c in v.items()}
    dim = field.grid.dim
    grads = [{k: 1j * k[j] * c for k, c in v.items()} for j in range(dim)]
    grad_laps = [{k: 1j * k[j] * -ksq(k) * c for k, c in v.items()} for j in range(dim)]

    m1 = _dict_combine(
        *[(2.0, _conv(g, gl)) for g, gl in zip(grads, grad_laps)],
        (1.0, _conv(lap, lap)),
    )
    m4 = _dict_combine(*[(1.0, _conv(g, g)) for g in grads])
    m2 = _conv(m4, lap)

    series: dict = {}
    power = {(0,) * dim: 1.0 + 0.0j}
    for r in range(params.n_trunc + 1):
        a0c, a1c, a2c, a3c, a4c = series_coefficients(r, params, variant)
        sign = (-1.0) ** r
        pieces = [
            (sign * a1c, _conv(power, m1)),
            (sign * a2c, _conv(power, m2)),
            (-sign * a4c, _conv(power, m4)),
        ]
        if r >= 1:
            pieces.append((sign * a0c, _conv(power, bih)))
            pieces.append((-sign * a3c, _conv(power, lap)))
        series = _dict_combine((1.0, series), *pieces)
        power = _conv(power, v)

    total: dict = {}
    for k, c in v.items():
        total[k] = linear_symbol(k, params) * c
    for k, c in series.items():
        total[k] = total.get(k, 0.0) - c
    total.pop((0,) * dim, None)

    grid = field.grid
    m = grid.points_per_axis
    coeffs = np.zeros(grid.shape, dtype=complex)
    for k, c in total.items():
        if any(abs(ki) > m // 2 for ki in k):
            continue                                # beyond the resolved band
        coeffs[tuple(ki % m for ki in k)] += c      # +M/2 folds onto the -M/2 slot
    return SpectralField(grid, coeffs)
