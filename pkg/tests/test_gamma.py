import cmath
import math

import mpmath as mp
import pytest
from hypothesis import given
from hypothesis import strategies as st

from epstein_lab.errors import PoleError
from epstein_lab.gamma import log_sin, loggamma


@given(st.floats(-30, 60), st.floats(-3000, 3000))
def test_loggamma_matches_mpmath(x, y):
    z = complex(x, y)
    if abs(z - round(x)) < 1e-3 and round(x) <= 0:
        return
    ref = complex(mp.loggamma(mp.mpc(x, y)))
    got = loggamma(z)
    # compare exp-differences so branch conventions on Im do not matter
    assert abs(got.real - ref.real) <= 1e-12 * max(1.0, abs(ref))
    d = (got.imag - ref.imag) / (2 * math.pi)
    assert abs(d - round(d)) * 2 * math.pi <= 1e-12 * max(1.0, abs(ref))


def test_loggamma_known_values():
    assert loggamma(1) == pytest.approx(0, abs=1e-15)
    assert loggamma(0.5).real == pytest.approx(0.5 * math.log(math.pi), rel=1e-15)
    assert cmath.exp(loggamma(5)).real == pytest.approx(24, rel=1e-14)


@pytest.mark.parametrize("n", [0, -1, -7])
def test_loggamma_poles(n):
    with pytest.raises(PoleError):
        loggamma(n)


@given(st.floats(-50, 50), st.floats(-700, 700))
def test_log_sin(x, y):
    z = complex(x, y)
    got = cmath.exp(log_sin(z))
    ref = complex(mp.sin(mp.mpc(x, y)))
    assert abs(got - ref) <= 1e-12 * max(1.0, abs(ref))
