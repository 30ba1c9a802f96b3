"""FILMv1 binary snapshot format.

Layout: magic bytes ``FILMv1\\0``, little-endian u32 dim, u32 points per
axis, f64 simulation time, then ``M^N`` little-endian f64 samples in
row-major order.  Samples follow the lattice of :class:`~filmspec.spectral.Grid`
(sample ``j`` at ``x_j = -pi + 2 pi j / M`` per axis).
"""

from __future__ import annotations

import struct
from pathlib import Path

import numpy as np

from .spectral import Grid, SpectralField, forward_transform, inverse_transform

MAGIC = b"FILMv1\x00"
_HEADER = struct.Struct("<IId")


def write_snapshot(path, field: SpectralField, time: float) -> None:
    samples = inverse_transform(field)
    write_snapshot_samples(path, samples, time)


def write_snapshot_samples(path, samples: np.ndarray, time: float) -> None:
    samples = np.asarray(samples, dtype=float)
    grid = Grid(samples.ndim, samples.shape[0])
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(_HEADER.pack(grid.dim, grid.points_per_axis, float(time)))
        fh.write(np.ascontiguousarray(samples, dtype="<f8").tobytes())


def read_snapshot(path) -> tuple[np.ndarray, float]:
    """Return ``(samples, time)``; raises :class:`ValueError` on malformed files."""
    raw = Path(path).read_bytes()
    if len(raw) < len(MAGIC) + _HEADER.size:
        raise ValueError(f"{path}: truncated snapshot header")
    if raw[: len(MAGIC)] != MAGIC:
        raise ValueError(f"{path}: bad magic bytes, not a FILMv1 snapshot")
    dim, m, time = _HEADER.unpack_from(raw, len(MAGIC))
    grid = Grid(dim, m)
    body = raw[len(MAGIC) + _HEADER.size:]
    expected = grid.num_points * 8
    if len(body) != expected:
        raise ValueError(f"{path}: expected {expected} sample bytes, found {len(body)}")
    samples = np.frombuffer(body, dtype="<f8").astype(float).reshape(grid.shape)
    return samples, float(time)


def read_snapshot_field(path) -> tuple[SpectralField, float]:
    samples, time = read_snapshot(path)
    return forward_transform(samples), time
