"""Matrix logarithm by degree-optimal polynomial evaluation schemes."""

from ._graphlogm import (
    Error,
    InputError,
    NumericalError,
    logm,
    relative_error,
    scheme,
    sqrtm,
    stability,
    test_matrix,
    theta_table,
    unit_roundoff,
)

__all__ = [
    "Error",
    "InputError",
    "NumericalError",
    "logm",
    "relative_error",
    "scheme",
    "sqrtm",
    "stability",
    "test_matrix",
    "theta_table",
    "unit_roundoff",
]
