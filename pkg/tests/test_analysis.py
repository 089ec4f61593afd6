import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from epstein_lab import analysis as an
from epstein_lab.analysis.oscillatory import oscillatory_integral
from epstein_lab.analysis.transform import phase_deriv_F_printed
from epstein_lab.errors import DomainError
from epstein_lab.qform import QuadraticForm
from epstein_lab.zeros import scan_zeros
from epstein_lab.zeta import hardy_w

SQUARE = QuadraticForm(1, 0, 1)


# ---------------------------------------------------------------- smoothing params

def test_make_smoothing_desk_case():
    p = an.make_smoothing(1e4, 10.0, 0.1)
    assert p.L == pytest.approx(8 * math.sqrt(math.log(1e4)), rel=1e-15)
    assert p.G == pytest.approx(10 / p.L, rel=1e-15)
    assert p.Y == pytest.approx(10 ** 4.4 / 10, rel=1e-14)
    assert p.V * p.Y == pytest.approx(p.T ** (1 + p.eps), rel=1e-15)


@pytest.mark.parametrize("T, V, eps", [(1e4, 1e4 ** 0.6, 0.1), (1e4, 10.0, 0.0), (50, 3.0, 0.1), (1e4, 1.5, 0.1)])
def test_make_smoothing_rejects(T, V, eps):
    with pytest.raises(DomainError):
        an.make_smoothing(T, V, eps)


@given(st.floats(100, 1e12), st.floats(0.01, 0.2), st.floats(0, 1))
def test_make_smoothing_identities(T, eps, u):
    V = T ** (eps + u * (0.5 - 2 * eps))
    p = an.make_smoothing(T, V, eps)
    assert p.G * p.L == pytest.approx(p.V, rel=1e-14)
    assert p.V * p.Y == pytest.approx(T ** (1 + eps), rel=1e-13)


# ---------------------------------------------------------------- eta

def test_eta_examples():
    assert an.eta_weight(7.0, 7.0, 2.0, 2) == 1.0
    assert an.eta_weight(11.0, 7.0, 2.0, 2) == 0.0
    assert an.eta_weight(3.0, 7.0, 2.0, 2) == 0.0
    assert an.eta_weight(10.0, 7.0, 2.0, 2) == pytest.approx(0.5, abs=1e-15)
    assert an.eta_weight(4.0, 7.0, 2.0, 5) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(DomainError):
        an.eta_weight(0, 0, 0, 2)
    with pytest.raises(DomainError):
        an.eta_weight(0, 0, 1, 1)


@pytest.mark.parametrize("J", [2, 3, 5])
def test_eta_smoothness_order(J):
    S = an.eta_band_polynomial(J)
    assert S.degree() == 2 * J - 1
    for k in range(1, J):
        assert abs(S.deriv(k)(0.0)) < 1e-8 and abs(S.deriv(k)(1.0)) < 1e-8
    # order J is the first that does not vanish, so eta is C^{J-1} and no better
    assert abs(S.deriv(J)(0.0)) > 1e-3
    for u in np.linspace(0, 1, 41):
        assert an.eta_weight(-2 + u, 0.0, 1.0, J) == pytest.approx(S(u), abs=1e-13)


@pytest.mark.parametrize("J", [2, 3, 5])
def test_eta_divided_differences_shrink(J):
    """One-sided k-th differences at a band edge scale like h^{J-k}, so they vanish as h -> 0."""
    for k in range(1, J):
        d = []
        for h in (1e-2, 5e-3):
            vals = [an.eta_weight(-2.0 + i * h, 0.0, 1.0, J) for i in range(k + 1)]
            d.append(np.diff(vals, n=k)[0] / h ** k)
        assert abs(d[1]) < abs(d[0]) * 0.6


@given(st.floats(-10, 10), st.floats(0.1, 5), st.integers(2, 6))
def test_eta_bounded_and_symmetric(x, Y, J):
    v = an.eta_weight(x, 0.0, Y, J)
    assert 0.0 <= v <= 1.0
    assert v == pytest.approx(an.eta_weight(-x, 0.0, Y, J), abs=1e-14)


# ---------------------------------------------------------------- window integrals

def test_zero_free_window_has_equality():
    i1, i2 = an.gaussian_window_integrals(SQUARE, 3.0, 2.5, 1.0)
    assert abs(i1 - abs(i2)) <= 1e-6 * i1


def test_window_with_sign_change_is_strict():
    i1, i2 = an.gaussian_window_integrals(SQUARE, 6.02, 0.5, 0.5)
    assert i1 > abs(i2) * (1 + 1e-6)


def test_narrow_gaussian_recovers_w():
    t, G = 20.0, 0.01
    _, i2 = an.gaussian_window_integrals(SQUARE, t, 2.5, G)
    assert i2 / (math.sqrt(math.pi) * G) == pytest.approx(hardy_w(SQUARE, t), rel=1e-2)


def test_smoothed_integrals_uses_params():
    p = an.make_smoothing(1e4, 10.0, 0.1)
    i1, i2 = an.smoothed_integrals(SQUARE, 40.0, p)
    j1, j2 = an.gaussian_window_integrals(SQUARE, 40.0, 2.5, p.G)
    assert isinstance(i2, complex)
    assert (i1, i2.real) == pytest.approx((j1, j2))
    assert i1 >= abs(i2)


# ---------------------------------------------------------------- oscillatory integrals

def test_family_passes():
    fam = an.load_family()
    assert len(fam) == 30
    kinds = {p.name.split("-")[0] for p in fam}
    assert kinds == {"quadratic", "cubic", "transform"}
    for p in fam:
        r = an.oscillatory_bound_check(p)
        assert r.passed, p.name


def test_quadrature_against_fresnel():
    from scipy.special import fresnel

    val, _ = oscillatory_integral(lambda x: x * x, lambda x: 2 * x, lambda x: 1.0, 0.0, 10.0)
    S, C = fresnel(10 * math.sqrt(2 / math.pi))
    ref = math.sqrt(math.pi / 2) * complex(C, S)
    assert abs(val - ref) < 1e-10
    # the quadratic instance on [0, 10]: the modulus is well below 2 even though
    # F' = 2x vanishes at 0, so the first-derivative hypotheses cannot be certified
    assert abs(val) <= 2
    with pytest.raises(DomainError):
        an.check_hypotheses(an.OscillatoryProblem(lambda x: x * x, lambda x: 2 * x, lambda x: 1.0, 0.0, 10.0, 2.0))


def test_linear_phase_rejected_without_attestation():
    p = an.OscillatoryProblem(lambda x: x, lambda x: 1.0, lambda x: 1.0, 0.0, 1.0, 1.0, monotone_attested=False)
    with pytest.raises(DomainError):
        an.oscillatory_bound_check(p)


def test_linear_phase_meets_bound_when_attested():
    # int_0^b e^{ix} has modulus |2 sin(b/2)| <= 2 <= 4/m with m = 1
    p = an.OscillatoryProblem(lambda x: x, lambda x: 1.0, lambda x: 1.0, 0.0, 3.0, 1.0)
    r = an.oscillatory_bound_check(p)
    assert r.integral_mod == pytest.approx(2 * math.sin(1.5), rel=1e-12)
    assert r.passed


def test_second_derivative_reading_fails():
    """With F'' >= m the 4/m bound is false: F = M x^2 / 2 on [0, 1] gives ~sqrt(pi/2M)."""
    M = 100.0
    val, _ = oscillatory_integral(lambda x: M * x * x / 2, lambda x: M * x, lambda x: 1.0, 0.0, 1.0)
    assert abs(val) > 4 / M
    assert abs(val) == pytest.approx(math.sqrt(math.pi / (2 * M)), rel=0.2)


@given(st.floats(0.05, 5), st.floats(0.05, 3), st.floats(0.5, 20))
def test_first_derivative_bound_property(gamma, a, length):
    p = an.OscillatoryProblem(lambda x: gamma * x * x, lambda x: 2 * gamma * x, lambda x: 1.0,
                              a, a + length, 2 * gamma * a)
    assert an.oscillatory_bound_check(p).passed


def test_hypothesis_gate_checks_sign_and_monotonicity():
    bad_sign = an.OscillatoryProblem(lambda x: math.sin(x), math.cos, lambda x: 1.0, 0.0, 3.0, 0.01)
    with pytest.raises(DomainError):
        an.check_hypotheses(bad_sign)


# ---------------------------------------------------------------- transformation scaffolding

def test_phi_values():
    assert an.phi(0) == 0
    assert an.phi(1) == pytest.approx(math.log(1 + math.sqrt(2)) + math.sqrt(2), rel=1e-15)
    assert an.phi(1e-8) / math.sqrt(1e-8) == pytest.approx(2, abs=1e-4)
    with pytest.raises(DomainError):
        an.phi(-1)
    with pytest.raises(DomainError):
        an.phi_deriv(0)


@given(st.floats(1e-3, 10))
def test_phi_deriv_matches_finite_difference(x):
    h = 1e-6 * x
    fd = (an.phi(x + h) - an.phi(x - h)) / (2 * h)
    assert fd == pytest.approx(an.phi_deriv(x), rel=1e-6)


def test_n_j_values():
    assert an.n_j_values(1, 1, 1, 1, 1, 1) == (1, 1)
    a = an.n_j_values(3, 2, 5, 7, 11, 13)
    b = an.n_j_values(3, 2, 5, 7, 44, 52)
    assert b == pytest.approx((a[0] / 4, a[1] / 4))
    with pytest.raises(DomainError):
        an.n_j_values(1, 1, 1, 1, 0, 1)


def test_n_j_desk_instance():
    """At T = 1e4 the n_j sit at a fixed multiple of Y: h^2 m^2 / M ~ 8 pi Y / sqrt(Delta) (h^2 Y / T)."""
    T, form = 1e4, QuadraticForm(1, 1, 1)
    p = an.make_smoothing(T, T ** 0.4, 0.1)
    r = an.cf_approx(form.disc, math.sqrt(T / p.Y))
    P = T * math.sqrt(form.disc) / (2 * math.pi)
    M1, M2 = P - 2 * p.Y, P + 2 * p.Y
    drift = T / (2 * math.pi) * (math.sqrt(form.disc) - r.k / r.h)
    m1, m2 = -drift + 2 * p.Y, drift + 2 * p.Y
    n1, n2 = an.n_j_values(form.disc, r.h, m1, m2, M1, M2)
    predicted = form.disc * r.h ** 2 * 4 * p.Y ** 2 / P
    for n in (n1, n2):
        assert 0.5 * predicted <= n <= 2 * predicted
    assert max(n1, n2) / p.Y < 100


def test_phase_derivative_examples():
    assert an.phase_deriv_F(0.5, 3, 3, 10.0) == 0
    for x in np.linspace(0.5, 50, 100):
        assert an.phase_deriv_F(0.5, 4, 1, x) > 0


@given(st.floats(0.01, 2), st.floats(0.5, 20), st.floats(0.5, 20), st.floats(1, 200))
def test_phase_derivative_matches_finite_difference(C2, m, n, x):
    if abs(m - n) < 1e-3:
        return
    h = 1e-5 * x
    fd = (an.phase_F(C2, m, n, x + h) - an.phase_F(C2, m, n, x - h)) / (2 * h)
    assert fd == pytest.approx(an.phase_deriv_F(C2, m, n, x), rel=1e-6)


def test_printed_phase_derivative_disagrees():
    C2, m, n, x = 0.5, 4.0, 1.0, 10.0
    h = 1e-5 * x
    fd = (an.phase_F(C2, m, n, x + h) - an.phase_F(C2, m, n, x - h)) / (2 * h)
    assert abs(phase_deriv_F_printed(C2, m, n, x) - fd) > 0.1 * abs(fd)


def test_phase_derivative_lower_bound():
    T = 1000.0
    worst = math.inf
    for C2, m, n in ((0.5, 4, 1), (0.1, 9, 2), (1.0, 7, 3)):
        for x in np.linspace(T / 2, T, 101):
            ratio = abs(an.phase_deriv_F(C2, m, n, x)) / (math.sqrt(C2 / x) * abs(math.sqrt(m) - math.sqrt(n)))
            worst = min(worst, ratio)
    assert worst >= 1


def test_amplitude_and_constants():
    assert an.amplitude_G(1.0, 0.0001, 0.0001, 1e6) == pytest.approx(1, abs=1e-9)
    assert an.c2_constant(2, 3, 5) == pytest.approx(math.pi / 60)
    # 2 * 2 = 1 mod 3 and 5 * 2 = 1 mod 3
    assert an.c1_constant(2, 3, 5) == pytest.approx(4 / 3 - 1 / 60)
    with pytest.raises(DomainError):
        an.c1_constant(3, 6, 5)


def test_cf_examples():
    r = an.cf_approx(3, 1)
    assert (r.k, r.h) == (2, 1) and r.err == pytest.approx(2 - math.sqrt(3))
    r = an.cf_approx(3, 15)
    assert 8 <= r.h <= 30 and r.err_h2 <= 1
    with pytest.raises(DomainError):
        an.cf_approx(4, 3)
    with pytest.raises(DomainError):
        an.cf_approx(3, 0.5)


@pytest.mark.parametrize("delta", [3, 228, 23, 40028])
def test_convergents_quality(delta):
    cs = an.convergents(delta, 20)
    assert [c.h for c in cs] == sorted(c.h for c in cs)
    for c in cs:
        assert math.gcd(c.h, c.k) == 1
        assert 0 < c.err_h2 <= 1
        # exact check of the approximation quality with integers
        assert abs(c.k * c.k - delta * c.h * c.h) < 2 * math.isqrt(delta) + 2


def test_convergents_of_228_have_positive_floor():
    """|k^2 - 228 h^2| is 1 or 3 along the period, so err h^2 approaches 1/(2 sqrt 228) or 3/(2 sqrt 228)."""
    vals = [c.err_h2 for c in an.convergents(228, 20)]
    assert min(vals) == pytest.approx(1 / (2 * math.sqrt(228)), rel=1e-3)
    assert min(vals) > 0.03


@given(st.integers(2, 5000).filter(lambda d: math.isqrt(d) ** 2 != d), st.floats(1, 1e6))
def test_cf_approx_property(delta, target):
    r = an.cf_approx(delta, target)
    assert r.err_h2 <= 1
    cs = an.convergents(delta, 60)
    best = min(abs(c.h - target) for c in cs)
    assert abs(r.h - target) == best


# ---------------------------------------------------------------- mean values

def test_mean_square_examples():
    assert an.mean_square_coeffs(SQUARE, 5) == 112
    assert an.mean_square_coeffs(SQUARE, 1) == 16
    with pytest.raises(DomainError):
        an.mean_square_coeffs(SQUARE, 0.5)


def test_mean_square_growth():
    ratios = [an.mean_square_coeffs(SQUARE, x) / x ** 1.2 for x in (1e3, 1e4, 1e5)]
    assert ratios[0] >= ratios[1] >= ratios[2]


def test_first_power_mean_zero_length():
    assert an.first_power_mean(SQUARE, 500, 0) == 0.0


def test_first_power_mean_scales_with_h():
    a = an.first_power_mean(SQUARE, 300, 10)
    b = an.first_power_mean(SQUARE, 300, 20)
    assert a >= 0.1 * 10
    assert 2 / 3 <= b / a <= 6


def test_zeta_abs_on_line_matches_zeta_q():
    from epstein_lab.zeta import zeta_q

    for t in (0.3, 5.0, 77.7):
        assert an.zeta_abs_on_line(SQUARE, t) == pytest.approx(abs(zeta_q(SQUARE, complex(0.5, t)).zeta), rel=1e-10)
