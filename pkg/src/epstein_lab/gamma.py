"""Complex log-gamma from the Stirling series, shifted into Re z >= 10."""

from __future__ import annotations

import cmath
import math

import numpy as np

from .errors import PoleError

# B_{2k} / (2k (2k - 1)), k = 1..9
_STIRLING = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
)
_HALF_LOG_2PI = 0.5 * math.log(2 * math.pi)
_SHIFT_TO = 10.0


def loggamma(z: complex) -> complex:
    """Principal branch of log Gamma(z), matching the usual slit-plane convention."""
    z = complex(z)
    if z.imag == 0 and z.real <= 0 and z.real == math.floor(z.real):
        raise PoleError(f"Gamma has a pole at {z.real}")
    shift = 0j
    while z.real < _SHIFT_TO:
        shift += cmath.log(z)
        z += 1
    w = 1.0 / z
    w2 = w * w
    series = 0j
    for coef in reversed(_STIRLING):
        series = series * w2 + coef
    return (z - 0.5) * cmath.log(z) - z + _HALF_LOG_2PI + series * w - shift


def loggamma_array(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.vectorize(loggamma, otypes=[complex])(z)


def log_sin(z: complex) -> complex:
    """A logarithm of sin(z) that stays finite for large |Im z|.

    Only the exponential is meaningful; the imaginary part is not reduced to
    the principal branch.
    """
    z = complex(z)
    if z.imag > 0:
        # sin z = (i/2) e^{-iz} (1 - e^{2iz})
        return -1j * z + cmath.log(0.5j) + cmath.log(1 - cmath.exp(2j * z))
    if z.imag < 0:
        return log_sin(z.conjugate()).conjugate()
    s = math.sin(z.real)
    if s == 0:
        return complex(-math.inf)
    return complex(math.log(abs(s)), 0.0 if s > 0 else math.pi)
