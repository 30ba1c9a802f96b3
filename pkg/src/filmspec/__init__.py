"""Pseudo-spectral simulator and analysis toolkit for a fourth-order
thin-film dewetting equation on the periodic torus."""

__version__ = "0.1.0"

from .analysis import (
    BoundSet,
    Nondimensional,
    PhysicalParams,
    check_conditions,
    decay_envelope,
    delta1,
    delta2,
    dispersion,
    khenner_threshold,
    max_growth,
    nondimensionalize,
    series_closed_forms,
    smallness_margins,
)
from .integrator import (
    EnergyReport,
    NormSeries,
    SimConfig,
    SimResult,
    Tolerances,
    monitor_energy,
    simulate,
    step,
)
from .model import (
    G_closed,
    G_deriv,
    G_truncated,
    GuardError,
    ModelParams,
    RhsBreakdown,
    linear_symbol,
    rhs_convolution_oracle,
    rhs_pseudospectral,
    rhs_series,
)
from .snapshots import read_snapshot, read_snapshot_field, write_snapshot
from .spectral import (
    Grid,
    NormVector,
    SpectralField,
    derivative,
    field_from_modes,
    forward_transform,
    inverse_transform,
    linf_norm,
    mean,
    norm_vector,
    sobolev_norm,
    wiener_seminorm,
    zero_field,
)
from .verify import (
    CheckReport,
    check_delta_series,
    check_gradient_lemma,
    check_interpolation,
    check_linf_embedding,
    check_norm_ordering,
    check_positivity,
    check_rhs_equivalence,
    random_field,
)

__all__ = [name for name in dir() if not name.startswith("_")]
