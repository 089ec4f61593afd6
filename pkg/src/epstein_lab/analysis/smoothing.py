"""Smoothing parameters, the bump eta and the Gaussian-weighted integrals of W."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from ..errors import DomainError, QuadratureError
from ..qform import QuadraticForm
from ..zeros import scan_zeros
from ..zeta import DEFAULT_CONFIG, EvalConfig, evaluator


@dataclass(frozen=True)
class SmoothingParams:
    T: float
    V: float
    eps: float
    L: float
    G: float
    Y: float

    def P(self, u: float, disc: int) -> float:
        """u sqrt(Delta) / (2 pi)."""
        return u * math.sqrt(disc) / (2 * math.pi)


def make_smoothing(T: float, V: float, eps: float) -> SmoothingParams:
    """L = 8 sqrt(log T), G = V/L and Y = T^{1+eps}/V, inside T^eps <= V <= T^{1/2-eps}."""
    if T < 100:
        raise DomainError(f"T must be >= 100, got {T}")
    if not 0 < eps < 0.25:
        raise DomainError(f"eps must lie in (0, 1/4), got {eps}")
    lo, hi = T ** eps, T ** (0.5 - eps)
    if not lo <= V <= hi:
        raise DomainError(f"V = {V} is outside [T^eps, T^(1/2-eps)] = [{lo:.6g}, {hi:.6g}]")
    L = 8 * math.sqrt(math.log(T))
    return SmoothingParams(T=T, V=V, eps=eps, L=L, G=V / L, Y=T ** (1 + eps) / V)


def eta_weight(x: float, center: float, Y: float, J: int) -> float:
    """1 on [center-Y, center+Y], 0 outside [center-2Y, center+2Y].

    Each transition band is the regularised incomplete beta I_u(J, J), a degree
    2J-1 polynomial whose first J-1 derivatives vanish at both band ends.
    """
    if not Y > 0:
        raise DomainError("Y must be positive")
    if J < 2:
        raise DomainError("J must be >= 2")
    d = abs(x - center)
    if d <= Y:
        return 1.0
    if d >= 2 * Y:
        return 0.0
    return float(special.betainc(J, J, 2.0 - d / Y))


def eta_band_polynomial(J: int) -> np.polynomial.Polynomial:
    """I_u(J, J) as a polynomial in u: the integral of u^{J-1}(1-u)^{J-1} / B(J, J)."""
    kernel = np.polynomial.Polynomial([0, 1]) ** (J - 1) * np.polynomial.Polynomial([1, -1]) ** (J - 1)
    return kernel.integ() / special.beta(J, J)


def _breakpoints(form, lo, hi, config, extra=()):
    zs = [z.t for z in scan_zeros(form, lo, hi, config)] if hi > lo else []
    pts = sorted({lo, hi, *zs, *(p for p in extra if lo < p < hi)})
    return pts, len(zs)


def gaussian_window_integrals(form: QuadraticForm, t: float, half_width: float, G: float,
                              config: EvalConfig = DEFAULT_CONFIG,
                              epsrel: float = 1e-10, limit: int = 200) -> tuple[float, float]:
    """(int |W(u)| w(u) du, int W(u) w(u) du) over [t - hw, t + hw] with w = e^{-(t-u)^2/G^2}.

    W is real, so the second integral is returned as a real number. The range is
    split at the zeros of W, which makes |W| smooth on each piece.
    """
    lo, hi = t - half_width, t + half_width
    if lo < 0:
        raise DomainError("the window must lie in t >= 0")
    if not G > 0:
        raise DomainError("G must be positive")
    ev = evaluator(form, config)
    # a few cuts around the Gaussian peak so a narrow G is never stepped over
    extra = [t + k * G for k in (-8, -4, -2, -1, 0, 1, 2, 4, 8)]
    pts, _ = _breakpoints(form, lo, hi, config, extra)

    def f(u):
        return ev.hardy(u)[0] * math.exp(-((t - u) / G) ** 2)

    # absolute floor for panels deep in the Gaussian tail
    floor = 1e-13 * G * max(1.0, abs(ev.hardy(t)[0]))
    i1 = i2 = 0.0
    for a, b in zip(pts, pts[1:]):
        # the width cap keeps roughly 8 nodes per unit and per Gaussian width
        n_sub = max(1, math.ceil((b - a) / min(G, 1.0)))
        edges = np.linspace(a, b, n_sub + 1)
        for c, d in zip(edges, edges[1:]):
            val, err = integrate.quad(f, c, d, epsrel=epsrel, epsabs=floor, limit=limit)
            if not math.isfinite(val) or err > max(1e-8 * abs(val), 10 * floor):
                raise QuadratureError(f"quadrature on [{c}, {d}] did not converge (err {err:.3g})")
            i1 += abs(val)
            i2 += val
    return i1, i2


def smoothed_integrals(form: QuadraticForm, t: float, p: SmoothingParams,
                       config: EvalConfig = DEFAULT_CONFIG) -> tuple[float, complex]:
    """(I1, I2) over [t - V/4, t + V/4] with Gaussian width G."""
    i1, i2 = gaussian_window_integrals(form, t, p.V / 4, p.G, config)
    return i1, complex(i2)
