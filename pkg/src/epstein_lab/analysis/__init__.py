"""Components of the gap-counting argument, each testable on its own."""

from .meanvalues import first_power_mean, mean_square_coeffs, zeta_abs_on_line
from .oscillatory import (OscillatoryProblem, OscillatoryResult, check_hypotheses, load_family,
                          oscillatory_bound_check, oscillatory_integral)
from .smoothing import (SmoothingParams, eta_band_polynomial, eta_weight, gaussian_window_integrals, make_smoothing,
                        smoothed_integrals)
from .transform import (RationalApprox, amplitude_G, c1_constant, c2_constant, cf_approx, convergents,
                        n_j_values, phase_deriv_F, phase_F, phi, phi_deriv)

__all__ = [
    "OscillatoryProblem", "OscillatoryResult", "RationalApprox", "SmoothingParams", "amplitude_G",
    "c1_constant", "c2_constant", "cf_approx", "check_hypotheses", "convergents", "eta_band_polynomial", "eta_weight",
    "first_power_mean", "gaussian_window_integrals", "load_family", "make_smoothing",
    "mean_square_coeffs", "n_j_values", "oscillatory_bound_check", "oscillatory_integral",
    "phase_F", "phase_deriv_F", "phi", "phi_deriv", "smoothed_integrals", "zeta_abs_on_line",
]
