"""Variance of zero-set volumes of hyperbolic Gaussian analytic functions on the unit ball."""

__version__ = "0.1.0"

from .errors import (  # noqa: F401
    DegenerateSampleError,
    DomainError,
    GafvarError,
    PoleError,
    QuadratureBudgetError,
)
from .geometry import Params  # noqa: F401
