"""Epstein zeta functions of positive-definite binary quadratic forms."""

from .errors import (DomainError, EpsteinError, NonConvergenceError, PoleError, PrecisionLossError,
                     QuadratureError, ResourceError)
from .qform import (QuadraticForm, RepCountTable, count_classes, discriminant, gauss_sum, rep_counts,
                    stark_k)
from .zeros import GapTable, ZeroRecord, gap_stats, real_zero_in_unit_interval, scan_zeros, stark_prediction
from .zeta import (DEFAULT_CONFIG, CompletedZetaValue, EvalConfig, approx_critical_line, chi,
                   dirichlet_series, hardy_f, hardy_w, zeta_q)

__version__ = "0.1.0"

__all__ = [
    "CompletedZetaValue", "DEFAULT_CONFIG", "DomainError", "EpsteinError", "EvalConfig", "GapTable",
    "NonConvergenceError", "PoleError", "PrecisionLossError", "QuadraticForm", "QuadratureError",
    "RepCountTable", "ResourceError", "ZeroRecord", "approx_critical_line", "chi", "count_classes",
    "dirichlet_series", "discriminant", "gap_stats", "gauss_sum", "hardy_f", "hardy_w",
    "real_zero_in_unit_interval", "rep_counts", "scan_zeros", "stark_k", "stark_prediction", "zeta_q",
]
