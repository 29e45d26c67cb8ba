"""Qubit-photon bound-state bands of a 1D superconducting quantum metamaterial."""
__version__ = "0.1.0"

from qpbands.errors import AmbiguityError, DomainError, PoleError  # noqa: E402
from qpbands.params import (  # noqa: E402
    DimensionlessParams,
    NormalizedParams,
    normalized_from_dimensionless,
)
from qpbands.spectrum import scan_bands, solve_band1, solve_band2  # noqa: E402

__all__ = [
    "AmbiguityError",
    "DimensionlessParams",
    "DomainError",
    "NormalizedParams",
    "PoleError",
    "normalized_from_dimensionless",
    "scan_bands",
    "solve_band1",
    "solve_band2",
]
