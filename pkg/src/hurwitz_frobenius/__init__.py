"""
Frobenius structures on Hurwitz spaces in genus zero and one.

Coverings are built with :class:`CoveringG0` (polynomial, Laurent and
rational kinds) or :class:`CoveringG1` (elliptic functions on a torus). The
Frobenius quantities at a covering come from :func:`frobenius_data`, and
the identities linking them are checked numerically in
:mod:`hurwitz_frobenius.verification`.
"""

from .descriptor import parse_descriptor, to_descriptor
from .errors import (DegenerateError, DomainError, IncompatibleDifferentialError,
                     NonSimpleStratumError, NotInvertibleError, PrecisionError, SearchFailure)
from .frobenius import (FrobeniusData, bergmann_quantities, flat_coordinates, frobenius_data,
                        g_function, hamiltonians, jacobian_consistency, log_tau_bergmann,
                        metric_coeffs, rotation_coeffs)
from .genus0 import BranchData, CoveringG0
from .genus1 import CoveringG1
from .series import TruncatedSeries, compose, residue, revert, schwarzian
from .theta import ThetaCache, dedekind_eta_theta, theta1, wp

__all__ = [
    "BranchData", "CoveringG0", "CoveringG1", "DegenerateError", "DomainError", "FrobeniusData",
    "IncompatibleDifferentialError", "NonSimpleStratumError", "NotInvertibleError",
    "PrecisionError", "SearchFailure", "ThetaCache", "TruncatedSeries", "bergmann_quantities",
    "compose", "dedekind_eta_theta", "flat_coordinates", "frobenius_data", "g_function",
    "hamiltonians", "jacobian_consistency", "log_tau_bergmann", "metric_coeffs", "parse_descriptor",
    "residue", "revert", "rotation_coeffs", "schwarzian", "theta1", "to_descriptor", "wp",
]
