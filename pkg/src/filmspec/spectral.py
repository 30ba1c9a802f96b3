"""Fourier representation of real fields on the periodic torus.

Fields live on ``[-pi, pi]^N`` (N = 1 or 2), sampled on a uniform lattice of
``M`` points per axis with ``M`` a power of two.  Coefficients follow the
convention

    vhat(k) = (2 pi)^(-N) * integral( v(x) exp(-i k.x) dx ),

so that ``v(x) = sum_k vhat(k) exp(i k.x)`` and a single cosine mode of
amplitude ``a`` has Wiener norm ``sum_k |vhat(k)| = a``.

The spatial mean (the k = 0 coefficient) is stored separately from the
coefficient array: the evolving unknown of the film equation has zero
average, and keeping the k = 0 slot pinned at zero makes mass conservation
a structural property of every downstream operation.

Instances of :class:`SpectralField` are immutable after construction and
safe to share between threads; the transforms themselves run
single-threaded.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

#: Torus side length (one axis).
AXIS_LENGTH = 2.0 * np.pi

#: Maximum supported derivative order.
MAX_DERIVATIVE_ORDER = 4

#: Absolute floor used when checking imaginary residues of inverse transforms.
HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class Grid:
    """Uniform sampling lattice on the torus ``[-pi, pi]^N``.

    Parameters
    ----------
    dim:
        Spatial dimension, 1 or 2.
    points_per_axis:
        Samples per axis; must be a power of two, at least 8.  Resolved
        integer modes per axis are ``-M/2 .. M/2-1`` in FFT ordering.
    """

    dim: int
    points_per_axis: int

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise ValueError(f"dim must be 1 or 2, got {self.dim}")
        m = self.points_per_axis
        if m < 8 or (m & (m - 1)) != 0:
            raise ValueError(f"points_per_axis must be a power of two >= 8, got {m}")

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def num_points(self) -> int:
        return self.points_per_axis ** self.dim

    @property
    def measure(self) -> float:
        """Volume of the torus, ``(2 pi)^N``."""
        return AXIS_LENGTH ** self.dim

    @cached_property
    def mode_axis(self) -> np.ndarray:
        """Integer wavenumbers along one axis in FFT order."""
        m = self.points_per_axis
        return np.rint(np.fft.fftfreq(m, d=1.0 / m)).astype(np.int64)

    @cached_property
    def modes(self) -> tuple[np.ndarray, ...]:
        """Per-axis wavenumber arrays broadcast to ``shape`` (float)."""
        k = self.mode_axis.astype(float)
        if self.dim == 1:
            return (k,)
        return tuple(np.meshgrid(k, k, indexing="ij"))

    @cached_property
    def k_squared(self) -> np.ndarray:
        return sum(k * k for k in self.modes)

    @cached_property
    def k_abs(self) -> np.ndarray:
        return np.sqrt(self.k_squared)

    @cached_property
    def x_axis(self) -> np.ndarray:
        m = self.points_per_axis
        return -np.pi + AXIS_LENGTH * np.arange(m) / m

    def x_mesh(self) -> tuple[np.ndarray, ...]:
        """Sample coordinates, one array per axis, each of shape ``shape``."""
        if self.dim == 1:
            return (self.x_axis,)
        return tuple(np.meshgrid(self.x_axis, self.x_axis, indexing="ij"))


@dataclass(frozen=True)
class SpectralField:
    """Real field on a :class:`Grid`, held as Fourier coefficients.

    ``coeffs`` is a complex array in FFT layout whose k = 0 slot is exactly
    zero; the spatial mean travels in ``mean``.  The constructor takes
    ownership of ``coeffs`` and marks it read-only.
    """

    grid: Grid
    coeffs: np.ndarray
    mean: float = 0.0

    def __post_init__(self):
        c = np.asarray(self.coeffs)
        if c.shape != self.grid.shape:
            raise ValueError(f"coefficient shape {c.shape} does not match grid {self.grid.shape}")
        if not np.iscomplexobj(c):
            c = c.astype(complex)
        if c.flat[0] != 0:
            raise ValueError("k = 0 coefficient must be zero; pass the mean separately")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)
        object.__setattr__(self, "mean", float(self.mean))

    def __add__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(self.grid, self.coeffs + other.coeffs, self.mean + other.mean)

    def __sub__(self, other: "SpectralField") -> "SpectralField":
        self._check_same_grid(other)
        return SpectralField(self.grid, self.coeffs - other.coeffs, self.mean - other.mean)

    def __mul__(self, scalar: float) -> "SpectralField":
        return SpectralField(self.grid, self.coeffs * scalar, self.mean * scalar)

    __rmul__ = __mul__

    def _check_same_grid(self, other: "SpectralField"):
        if other.grid != self.grid:
            raise ValueError("fields live on different grids")

    def coefficient(self, k) -> complex:
        """Coefficient at lattice vector ``k`` (tuple of ints, or int in 1D)."""
        k = _as_mode(k, self.grid.dim)
        m = self.grid.points_per_axis
        for ki in k:
            if not -m // 2 <= ki < m // 2:
                raise ValueError(f"mode {k} not resolved on this grid")
        if all(ki == 0 for ki in k):
            return complex(self.mean)
        idx = tuple(ki % m for ki in k)
        return complex(self.coeffs[idx])


@dataclass(frozen=True)
class NormVector:
    """All monitored norms of a field at one instant."""

    a0: float
    a2: float
    a4: float
    l2: float
    h2: float
    linf: float
    mean: float


def _as_mode(k, dim: int) -> tuple[int, ...]:
    if np.isscalar(k):
        k = (int(k),)
    k = tuple(int(ki) for ki in k)
    if len(k) != dim:
        raise ValueError(f"mode {k} has wrong dimension, expected {dim}")
    return k


def zero_field(grid: Grid) -> SpectralField:
    return SpectralField(grid, np.zeros(grid.shape, dtype=complex))


def field_from_modes(grid: Grid, modes) -> SpectralField:
    """Build a real field from a list of ``(k, amplitude, phase)`` entries.

    Each entry contributes ``amplitude * cos(k.x + phase)``.  Modes must be
    nonzero and strictly inside the resolved band (Nyquist excluded so the
    Hermitian pairing stays exact).
    """
    m = grid.points_per_axis
    c = np.zeros(grid.shape, dtype=complex)
    for entry in modes:
        k, amplitude, phase = entry
        k = _as_mode(k, grid.dim)
        if all(ki == 0 for ki in k):
            raise ValueError("k = 0 is not allowed: fields are zero-mean")
        if any(abs(ki) > m // 2 - 1 for ki in k):
            raise ValueError(f"mode {k} outside the resolved band |k| <= {m // 2 - 1}")
        half = 0.5 * amplitude * np.exp(1j * phase)
        idx = tuple(ki % m for ki in k)
        neg = tuple((-ki) % m for ki in k)
        c[idx] += half
        c[neg] += np.conj(half)
    return SpectralField(grid, c)


def forward_transform(samples: np.ndarray) -> SpectralField:
    """Transform real samples on the lattice into a :class:`SpectralField`.

    The sample at index ``j`` sits at ``x_j = -pi + 2 pi j / M`` per axis.
    The spatial mean is recorded on the returned field, not in the
    coefficient array.
    """
    samples = np.asarray(samples, dtype=float)
    if samples.ndim not in (1, 2):
        raise ValueError(f"samples must be 1D or 2D, got ndim={samples.ndim}")
    if len(set(samples.shape)) != 1:
        raise ValueError(f"samples must be square, got shape {samples.shape}")
    if not np.all(np.isfinite(samples)):
        raise ValueError("samples contain non-finite values")
    grid = Grid(samples.ndim, samples.shape[0])
    c = np.fft.fftn(np.fft.ifftshift(samples)) / grid.num_points
    mean = float(c.flat[0].real)
    c.flat[0] = 0.0
    return SpectralField(grid, c, mean)


def inverse_transform(field: SpectralField) -> np.ndarray:
    """Reconstruct real samples; raises if Hermitian symmetry is broken.

    The imaginary residue of the reconstruction must stay below
    ``1e-12 * max(1, peak)``; it is discarded after the check.
    """
    c = np.array(field.coeffs)
    c.flat[0] = field.mean
    u = np.fft.fftshift(np.fft.ifftn(c) * field.grid.num_points)
    peak = float(np.max(np.abs(u.real))) if u.size else 0.0
    residue = float(np.max(np.abs(u.imag)))
    if residue > HERMITIAN_TOL * max(1.0, peak):
        raise ValueError(
            f"broken Hermitian symmetry: imaginary residue {residue:.3e} "
            f"exceeds {HERMITIAN_TOL:.0e} * max(1, peak)"
        )
    return np.ascontiguousarray(u.real)


def wiener_seminorm(field: SpectralField, alpha: float) -> float:
    """``sum_k |k|^alpha |vhat(k)|`` over the resolved modes."""
    if alpha < 0:
        raise ValueError(f"alpha must be nonnegative, got {alpha}")
    weights = field.grid.k_abs ** alpha if alpha != 0 else np.ones(field.grid.shape)
    total = float(np.sum(weights * np.abs(field.coeffs)))
    if alpha == 0:
        total += abs(field.mean)
    return total


def sobolev_norm(field: SpectralField, s: float) -> float:
    """Bessel-potential norm ``((2 pi)^N sum_k (1+|k|^2)^s |vhat|^2)^(1/2)``."""
    grid = field.grid
    weights = (1.0 + grid.k_squared) ** s
    total = np.sum(weights * np.abs(field.coeffs) ** 2) + field.mean ** 2
    return float(np.sqrt(grid.measure * total))


def l2_norm(field: SpectralField) -> float:
    return sobolev_norm(field, 0.0)


def linf_norm(field: SpectralField) -> float:
    """Max absolute value over the sample lattice."""
    return float(np.max(np.abs(inverse_transform(field))))


def mean(field: SpectralField) -> float:
    """The recorded k = 0 coefficient (spatial average)."""
    return field.mean


def derivative(field: SpectralField, multi_index) -> SpectralField:
    """Partial derivative ``prod_j (d/dx_j)^(m_j)``, total order at most 4.

    Odd per-axis orders zero the Nyquist slot so derivatives of real fields
    stay real; guarded fields carry negligible energy there.
    """
    grid = field.grid
    mi = _as_multi_index(multi_index, grid.dim)
    if sum(mi) > MAX_DERIVATIVE_ORDER:
        raise ValueError(f"derivative order {sum(mi)} unsupported (max {MAX_DERIVATIVE_ORDER})")
    if sum(mi) == 0:
        return field
    m = grid.points_per_axis
    c = np.array(field.coeffs)
    for axis, order in enumerate(mi):
        if order == 0:
            continue
        k = grid.mode_axis.astype(float)
        if order % 2 == 1:
            k = k.copy()
            k[m // 2] = 0.0
        mult = (1j * k) ** order
        shape = [1] * grid.dim
        shape[axis] = m
        c *= mult.reshape(shape)
    c.flat[0] = 0.0
    return SpectralField(grid, c)


def _as_multi_index(multi_index, dim: int) -> tuple[int, ...]:
    if np.isscalar(multi_index):
        multi_index = (int(multi_index),)
    mi = tuple(int(v) for v in multi_index)
    if len(mi) != dim:
        raise ValueError(f"multi-index {mi} has wrong dimension, expected {dim}")
    if any(v < 0 for v in mi):
        raise ValueError(f"multi-index components must be nonnegative, got {mi}")
    return mi


def norm_vector(field: SpectralField) -> NormVector:
    return NormVector(
        a0=wiener_seminorm(field, 0.0),
        a2=wiener_seminorm(field, 2.0),
        a4=wiener_seminorm(field, 4.0),
        l2=l2_norm(field),
        h2=sobolev_norm(field, 2.0),
        linf=linf_norm(field),
        mean=field.mean,
    )


# ---------------------------------------------------------------------------
# Zero-padded sampling for dealiased pointwise products (2/3-rule padding).
# ---------------------------------------------------------------------------

def padded_points(m: int, factor: float = 1.5) -> int:
    p = int(round(m * factor))
    if p < m:
        raise ValueError("padding factor must be >= 1")
    return p


def _embed_spectrum(coeffs: np.ndarray, padded_shape: tuple[int, ...]) -> np.ndarray:
    # The lone -M/2 slot of the band is split evenly between -M/2 and +M/2 on
    # the padded lattice so Hermitian inputs stay exactly real when sampled.
    out = np.zeros(padded_shape, dtype=complex)
    shifted = np.fft.fftshift(coeffs)
    offsets = [(p - m) // 2 for p, m in zip(padded_shape, coeffs.shape)]
    slices = tuple(slice(o, o + m) for o, m in zip(offsets, coeffs.shape))
    out[slices] = shifted
    for axis, (o, m) in enumerate(zip(offsets, coeffs.shape)):
        lo = _axis_slice(out.ndim, axis, o)
        hi = _axis_slice(out.ndim, axis, o + m)
        out[lo] *= 0.5
        out[hi] = out[lo]
    return np.fft.ifftshift(out)


def _crop_spectrum(coeffs_pad: np.ndarray, shape: tuple[int, ...]) -> np.ndarray:
    # Fold the +M/2 plane back onto -M/2 (inverse of the split in _embed_spectrum).
    shifted = np.array(np.fft.fftshift(coeffs_pad))
    offsets = [(p - m) // 2 for p, m in zip(coeffs_pad.shape, shape)]
    for axis, (o, m) in enumerate(zip(offsets, shape)):
        lo = _axis_slice(shifted.ndim, axis, o)
        hi = _axis_slice(shifted.ndim, axis, o + m)
        shifted[lo] += shifted[hi]
    slices = tuple(slice(o, o + m) for o, m in zip(offsets, shape))
    return np.fft.ifftshift(shifted[slices])


def _axis_slice(ndim: int, axis: int, index: int) -> tuple:
    sl = [slice(None)] * ndim
    sl[axis] = index
    return tuple(sl)


def padded_samples(coeffs: np.ndarray, grid: Grid, factor: float = 1.5) -> np.ndarray:
    """Physical samples of a coefficient array on a zero-padded lattice.

    Sample positions use the unshifted ``[0, 2 pi)`` parameterisation; this
    is immaterial for pointwise products, which is all the padded lattice is
    used for.
    """
    p = padded_points(grid.points_per_axis, factor)
    padded_shape = (p,) * grid.dim
    c = _embed_spectrum(coeffs, padded_shape)
    return np.fft.ifftn(c).real * (p ** grid.dim)


def spectrum_from_padded(samples_pad: np.ndarray, grid: Grid) -> np.ndarray:
    """Coefficients of padded-lattice samples, truncated to the grid band."""
    p = samples_pad.shape[0]
    c = np.fft.fftn(samples_pad) / (p ** grid.dim)
    return _crop_spectrum(c, grid.shape)
