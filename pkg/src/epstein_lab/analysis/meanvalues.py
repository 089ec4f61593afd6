"""Mean values on the critical line and of the coefficients r_Q(n)."""

from __future__ import annotations

import math

import numpy as np
from scipy import integrate

from ..errors import DomainError, QuadratureError, ResourceError
from ..qform import REP_COUNT_BUDGET, QuadraticForm, cached_rep_counts
from ..zeros import scan_zeros
from ..zeta import DEFAULT_CONFIG, EvalConfig, evaluator


def zeta_abs_on_line(form: QuadraticForm, t: float, config: EvalConfig = DEFAULT_CONFIG) -> float:
    """|zeta_Q(1/2 + it)| = |W(t)| sqrt(1 + e^{-2 pi t}) / Delta^{1/4}, for t >= 0.

    The factor is |e^{pi t/2} (sqrt(Delta)/2pi)^s Gamma(s)|^{-1} at s = 1/2 + it,
    from |Gamma(1/2 + it)|^2 = pi / cosh(pi t).
    """
    w = evaluator(form, config).hardy(t)[0]
    return abs(w) * math.sqrt(1 + math.exp(-2 * math.pi * t)) / form.disc ** 0.25


def first_power_mean(form: QuadraticForm, T: float, H: float, config: EvalConfig = DEFAULT_CONFIG,
                     epsrel: float = 1e-9) -> float:
    """int_T^{T+H} |zeta_Q(1/2 + it)| dt, integrated piecewise between zeros."""
    if H < 0 or T < 0:
        raise DomainError("need T >= 0 and H >= 0")
    if H == 0:
        return 0.0
    zs = [z.t for z in scan_zeros(form, T, T + H, config)]
    pts = sorted({T, T + H, *zs})
    total = 0.0
    for a, b in zip(pts, pts[1:]):
        n_sub = max(1, math.ceil(b - a))
        edges = np.linspace(a, b, n_sub + 1)
        for c, d in zip(edges, edges[1:]):
            val, err = integrate.quad(lambda t: zeta_abs_on_line(form, t, config), c, d,
                                      epsrel=epsrel, epsabs=0.0, limit=200)
            if not math.isfinite(val) or err > max(1e-7 * abs(val), 1e-14):
                raise QuadratureError(f"quadrature on [{c}, {d}] did not converge")
            total += val
    return total


def mean_square_coeffs(form: QuadraticForm, x: float, budget: int = REP_COUNT_BUDGET) -> int:
    """sum_{n <= x} r_Q(n)^2."""
    if x < 1:
        raise DomainError(f"x must be >= 1, got {x}")
    N = int(math.floor(x))
    if N > budget:
        raise ResourceError(f"x = {x} exceeds the rep-count budget {budget}")
    counts = cached_rep_counts(form, N).counts[1:N + 1].astype(np.int64)
    return int(np.dot(counts, counts))
