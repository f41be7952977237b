"""Explicit upper bounds for marginal densities of Ito processes with
locally bounded drift, built on the transition density of a doubly
reflected Brownian motion (DRBM) with drift."""

from itobound.bounds import (
    BoundReport,
    GlobalBound,
    LocalBoundInput,
    ScalarFieldSpec,
    SharpBound,
    global_density_bound,
    lamperti_transform,
    local_density_bound,
    sharp_local_bound,
    state_dependent_bound_1d,
)
from itobound.drbm_kernel import (
    DrbmParams,
    SeriesOptions,
    SeriesResult,
    density_upper_bound,
    density_upper_bound_simple,
    transition_density_at_zero,
)
from itobound.errors import (
    DriftBoundViolation,
    DriftBoundZero,
    InsufficientSamples,
    InvalidParameters,
    ItoBoundError,
    NoConvergence,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "DrbmParams",
    "DriftBoundViolation",
    "DriftBoundZero",
    "GlobalBound",
    "InsufficientSamples",
    "InvalidParameters",
    "ItoBoundError",
    "LocalBoundInput",
    "NoConvergence",
    "ScalarFieldSpec",
    "SeriesOptions",
    "SeriesResult",
    "SharpBound",
    "density_upper_bound",
    "density_upper_bound_simple",
    "global_density_bound",
    "lamperti_transform",
    "local_density_bound",
    "sharp_local_bound",
    "state_dependent_bound_1d",
    "transition_density_at_zero",
]
