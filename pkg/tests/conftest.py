import csv

import numpy as np
import pytest

from filmspec import Grid


@pytest.fixture
def grid64():
    return Grid(1, 64)


@pytest.fixture
def grid2d():
    return Grid(2, 16)


def naive_wiener(field, alpha):
    """Independent lattice summation of sum |k|^alpha |vhat(k)| (plus the mean)."""
    m = field.grid.points_per_axis
    freqs = np.fft.fftfreq(m, d=1.0 / m)
    total = abs(field.mean) if alpha == 0 else 0.0
    for idx in np.ndindex(field.grid.shape):
        k = np.array([freqs[i] for i in idx])
        c = field.coeffs[idx]
        if c == 0:
            continue
        kk = float(np.sqrt(np.sum(k * k)))
        weight = 1.0 if (alpha == 0 and kk == 0.0) else kk ** alpha
        total += weight * abs(c)
    return total


def naive_sobolev(field, s):
    """Independent lattice summation of the Bessel-weighted L2 norm."""
    m = field.grid.points_per_axis
    freqs = np.fft.fftfreq(m, d=1.0 / m)
    total = field.mean ** 2
    for idx in np.ndindex(field.grid.shape):
        k = np.array([freqs[i] for i in idx])
        c = field.coeffs[idx]
        total += (1.0 + float(np.sum(k * k))) ** s * abs(c) ** 2
    return float(np.sqrt((2 * np.pi) ** field.grid.dim * total))


def read_norms_csv(path):
    with open(path) as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    return {name: np.array([float(r[name]) for r in rows]) for name in reader.fieldnames}
