"""Exact analysis of inhomogeneous products of nonnegative matrices."""

from .exactmat import ExactMatrix, SupportPattern, support_pattern
from .hclass import HClassProfile, profile
from .projective import ExtendedLogValue, delta_coeff, proj_distance, tau

__version__ = "0.1.0"

__all__ = [
    "ExactMatrix",
    "SupportPattern",
    "support_pattern",
    "HClassProfile",
    "profile",
    "ExtendedLogValue",
    "delta_coeff",
    "proj_distance",
    "tau",
]
