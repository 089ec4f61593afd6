"""Scaffolding of the transformation step: phi, n_j, the phase F and its
amplitude, and continued-fraction approximations to sqrt(Delta)."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import DomainError


def phi(x: float) -> float:
    """arcsinh(sqrt x) + sqrt(x + x^2)."""
    if x < 0:
        raise DomainError(f"phi needs x >= 0, got {x}")
    return math.asinh(math.sqrt(x)) + math.sqrt(x + x * x)


def phi_deriv(x: float) -> float:
    """phi'(x) = sqrt((1 + x) / x); both terms of phi contribute (1+x)/(2 sqrt(x(1+x)))."""
    if x <= 0:
        raise DomainError(f"phi_deriv needs x > 0, got {x}")
    return math.sqrt((1 + x) / x)


def n_j_values(delta0: float, h: int, m1: float, m2: float, M1: float, M2: float) -> tuple[float, float]:
    """n_j = Delta_0 h^2 m_j^2 / M_j for j = 1, 2.

    Delta_0 comes from the external summation formula and has no definition
    here; callers conventionally pass Delta.
    """
    for name, v in (("delta0", delta0), ("h", h), ("m1", m1), ("m2", m2), ("M1", M1), ("M2", M2)):
        if not v > 0:
            raise DomainError(f"{name} must be positive, got {v}")
    return delta0 * h * h * m1 * m1 / M1, delta0 * h * h * m2 * m2 / M2


def _check_phase_args(C2, m, n, x):
    if not (C2 > 0 and m > 0 and n > 0 and x > 0):
        raise DomainError("C2, m, n and x must all be positive")


def phase_F(C2: float, m: float, n: float, x: float) -> float:
    """F(x) = 2x (phi(C2 m/x) - phi(C2 n/x))."""
    _check_phase_args(C2, m, n, x)
    return 2 * x * (phi(C2 * m / x) - phi(C2 * n / x))


def phase_deriv_F(C2: float, m: float, n: float, x: float) -> float:
    """F'(x) = 2 arcsinh(sqrt(C2 m/x)) - 2 arcsinh(sqrt(C2 n/x)).

    Differentiating 2x phi(c/x) gives 2 phi(u) - 2u phi'(u) with u = c/x, and the
    square-root parts cancel exactly, leaving only the arcsinh terms.
    """
    _check_phase_args(C2, m, n, x)
    return 2 * math.asinh(math.sqrt(C2 * m / x)) - 2 * math.asinh(math.sqrt(C2 * n / x))


def phase_deriv_F_printed(C2: float, m: float, n: float, x: float) -> float:
    """The longer closed form with extra 4 sqrt(u(1+u)) terms. It is not the
    derivative of F and is kept only so tests can show the mismatch."""
    _check_phase_args(C2, m, n, x)
    u, v = C2 * m / x, C2 * n / x
    return (2 * math.asinh(math.sqrt(u)) - 2 * math.asinh(math.sqrt(v))
            + 4 * math.sqrt(u * (1 + u)) - 4 * math.sqrt(v * (1 + v)))


def amplitude_G(C2: float, m: float, n: float, x: float) -> float:
    """((1 + C2 m/x)(1 + C2 n/x))^{-1/4}."""
    _check_phase_args(C2, m, n, x)
    return ((1 + C2 * m / x) * (1 + C2 * n / x)) ** -0.25


def c2_constant(h: int, k: int, delta0: int) -> float:
    return math.pi / (2 * h * k * delta0)


def c1_constant(h: int, k: int, delta0: int) -> float:
    """h' D' / k - 1/(2 h k Delta_0) with h h' = Delta_0 D' = 1 mod k."""
    if math.gcd(h, k) != 1 or math.gcd(delta0, k) != 1:
        raise DomainError("h and Delta_0 must be invertible modulo k")
    hbar = pow(h, -1, k) if k > 1 else 0
    dbar = pow(delta0, -1, k) if k > 1 else 0
    return hbar * dbar / k - 1 / (2 * h * k * delta0)


@dataclass(frozen=True)
class RationalApprox:
    """k/h approximating sqrt(Delta); err = |sqrt(Delta) - k/h|."""

    h: int
    k: int
    err: float
    delta: int

    def __post_init__(self):
        if self.h < 1 or self.k < 1:
            raise DomainError("h and k must be >= 1")
        if math.gcd(self.h, self.k) != 1:
            raise DomainError(f"{self.k}/{self.h} is not in lowest terms")

    @property
    def err_h2(self) -> float:
        return self.err * self.h * self.h


def _isqrt_exact(n: int) -> int | None:
    r = math.isqrt(n)
    return r if r * r == n else None


def convergents(delta: int, count: int) -> list[RationalApprox]:
    """The first ``count`` convergents k/h of sqrt(Delta), via the periodic
    expansion (m, d, a) of the quadratic surd in exact integers."""
    if delta < 1:
        raise DomainError("Delta must be positive")
    if _isqrt_exact(delta) is not None:
        raise DomainError(f"Delta = {delta} is a perfect square")
    a0 = math.isqrt(delta)
    m, d, a = 0, 1, a0
    p_prev, p = 1, a0
    q_prev, q = 0, 1
    root = math.sqrt(delta)
    out = []
    for _ in range(count):
        # |p^2 - Delta q^2| is an exact integer; dividing it avoids cancellation
        err = abs(p * p - delta * q * q) / (q * (p + q * root))
        out.append(RationalApprox(h=q, k=p, err=err, delta=delta))
        m = d * a - m
        d = (delta - m * m) // d
        a = (a0 + m) // d
        p_prev, p = p, a * p + p_prev
        q_prev, q = q, a * q + q_prev
    return out


def cf_approx(delta: int, h_target: float) -> RationalApprox:
    """The convergent of sqrt(Delta) whose denominator is closest to h_target.

    Ties go to the later convergent, which is the better approximation.
    """
    if not h_target >= 1:
        raise DomainError(f"h_target must be >= 1, got {h_target}")
    best = None
    n = 8
    while True:
        cs = convergents(delta, n)
        if cs[-1].h > h_target:
            break
        n *= 2
    for c in cs:
        if best is None or abs(c.h - h_target) <= abs(best.h - h_target):
            best = c
        if c.h > h_target:
            break
    return best
