"""Evaluation of the Epstein zeta function and its completed form.

Lambda(s) = (sqrt(Delta)/2pi)^s Gamma(s) zeta_Q(s) satisfies Lambda(s) = Lambda(1-s)
and has simple poles at s = 0, 1. Values of Lambda decay like e^{-pi|t|/2}, so
every result also carries the rescaled value e^{pi|t|/2} Lambda(s), which stays
representable at any height.
"""

from __future__ import annotations

import cmath
import math
import threading
from dataclasses import dataclass

import numpy as np

from . import _mp
from ._theta import SIGMA_SPAN, LambdaEvaluator
from .errors import DomainError, NonConvergenceError, PoleError, PrecisionLossError
from .gamma import log_sin, loggamma
from .qform import QuadraticForm, cached_rep_counts

POLE_GUARD = 1e-9
PRECISIONS = ("double", "extended")


@dataclass(frozen=True)
class EvalConfig:
    target_rel_err: float = 1e-12
    max_terms: int = 10_000_000
    incomplete_gamma_tol: float = 1e-16
    series_sigma_floor: float = 1.25
    precision: str = "double"
    reliable_height: float = 3000.0
    # rotation loss budget e^margin and Gauss-Legendre node spacing factor
    rotation_margin: float = 6.0
    node_density: float = 1.5

    def __post_init__(self):
        if not self.target_rel_err > 0:
            raise DomainError("target_rel_err must be positive")
        if self.max_terms < 1:
            raise DomainError("max_terms must be >= 1")
        if not 0 < self.incomplete_gamma_tol < 1:
            raise DomainError("incomplete_gamma_tol must lie in (0, 1)")
        if self.precision not in PRECISIONS:
            raise DomainError(f"precision must be one of {PRECISIONS}")


DEFAULT_CONFIG = EvalConfig()


@dataclass(frozen=True)
class CompletedZetaValue:
    s: complex
    lam: complex
    zeta: complex
    est_err: float
    # lam == lam_scaled * exp(-scale); lam itself underflows past |t| ~ 450
    lam_scaled: complex = 0j
    scale: float = 0.0
    est_err_scaled: float = 0.0
    zeta_err: float = 0.0

    def to_record(self, form: QuadraticForm) -> dict:
        return {
            "schema": 1,
            "form": str(form),
            "s_re": self.s.real,
            "s_im": self.s.imag,
            "zeta_re": self.zeta.real,
            "zeta_im": self.zeta.imag,
            "est_err": self.zeta_err,
            "lambda_scaled_re": self.lam_scaled.real,
            "lambda_scaled_im": self.lam_scaled.imag,
            "lambda_scale": self.scale,
            "lambda_est_err_scaled": self.est_err_scaled,
        }


_evaluators: dict[tuple, LambdaEvaluator] = {}
_eval_lock = threading.Lock()


def evaluator(form: QuadraticForm, config: EvalConfig = DEFAULT_CONFIG) -> LambdaEvaluator:
    key = (form, config.rotation_margin, config.incomplete_gamma_tol, config.node_density)
    with _eval_lock:
        ev = _evaluators.get(key)
        if ev is None:
            ev = LambdaEvaluator(form, margin=config.rotation_margin,
                                 cutoff=-math.log(config.incomplete_gamma_tol),
                                 density=config.node_density)
            _evaluators[key] = ev
    return ev


def log_gamma_weight(form: QuadraticForm, s: complex) -> complex:
    """log of (sqrt(Delta)/2pi)^s Gamma(s)."""
    return s * math.log(math.sqrt(form.disc) / (2 * math.pi)) + loggamma(s)


def dirichlet_series(form: QuadraticForm, s: complex, config: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Partial sum of sum r_Q(n) n^{-s}, long enough that the tail is below target."""
    s = complex(s)
    sig = s.real
    if sig < config.series_sigma_floor:
        raise DomainError(f"Re s = {sig} is below the series floor {config.series_sigma_floor}")
    density = 2 * math.pi / math.sqrt(form.disc)

    def partial(N):
        ns, rs = cached_rep_counts(form, N).support()
        ns = ns.astype(float)
        return complex(np.sum(rs * np.exp(-s * np.log(ns))))

    N = 1024
    S = partial(N)
    # tail ~ density N^{1-sigma} / (sigma - 1); factor 2 covers the lower-order terms
    need = (2 * density / ((sig - 1) * config.target_rel_err * max(abs(S), 1e-300))) ** (1 / (sig - 1))
    if need > config.max_terms:
        raise NonConvergenceError(
            f"series at Re s = {sig} needs ~{need:.3g} terms, above max_terms={config.max_terms}")
    if need > N:
        S = partial(int(math.ceil(need)))
    return S


def _check_point(s: complex, config: EvalConfig) -> None:
    if abs(s - 1) < POLE_GUARD or abs(s) < POLE_GUARD:
        raise PoleError(f"s = {s} is at a pole of the completed zeta function")
    if not (math.isfinite(s.real) and math.isfinite(s.imag)):
        raise DomainError(f"s = {s} is not finite")
    if abs(s.imag) > config.reliable_height:
        raise PrecisionLossError(
            f"|Im s| = {abs(s.imag)} exceeds the reliable height {config.reliable_height}")


def _scaled_lambda(form: QuadraticForm, s: complex, config: EvalConfig) -> tuple[complex, float]:
    if config.precision == "extended":
        digits = max(16, int(-math.log10(config.target_rel_err)) + 4)
        return _mp.scaled_lambda(form, s, digits)
    if s.real > SIGMA_SPAN or s.real < 1 - SIGMA_SPAN:
        # far from the strip: the series converges fast on whichever side applies
        w = s if s.real > SIGMA_SPAN else 1 - s
        z = dirichlet_series(form, w, config)
        lam = cmath.exp(log_gamma_weight(form, w) + math.pi * abs(w.imag) / 2) * z
        return lam, abs(lam) * config.target_rel_err
    return evaluator(form, config).scaled(s)


def zeta_q(form: QuadraticForm, s: complex, config: EvalConfig = DEFAULT_CONFIG) -> CompletedZetaValue:
    """zeta_Q(s) anywhere off the poles, through the completed function."""
    s = complex(s)
    _check_point(s, config)
    scale = math.pi * abs(s.imag) / 2
    lam_scaled, err_scaled = _scaled_lambda(form, s, config)
    if s.real <= 0 and s.real == math.floor(s.real) and s.imag == 0:
        # Gamma(s) has a pole: the trivial zeros zeta_Q(-n) = 0
        zeta, zeta_err = 0j, 0.0
    else:
        factor = cmath.exp(-scale - log_gamma_weight(form, s))
        zeta = lam_scaled * factor
        zeta_err = err_scaled * abs(factor)
    lam = lam_scaled * math.exp(-scale)
    return CompletedZetaValue(s=s, lam=lam, zeta=zeta, est_err=err_scaled * math.exp(-scale),
                              lam_scaled=lam_scaled, scale=scale, est_err_scaled=err_scaled,
                              zeta_err=zeta_err)


def hardy_f(form: QuadraticForm, t: float, config: EvalConfig = DEFAULT_CONFIG) -> complex:
    """f(1/2 + it) = e^{pi t/2} Lambda(1/2 + it); real up to rounding."""
    t = float(t)
    s = complex(0.5, t)
    _check_point(s, config)
    lam_scaled, _ = _scaled_lambda(form, s, config)
    return lam_scaled if t >= 0 else lam_scaled * math.exp(math.pi * t)


def hardy_w(form: QuadraticForm, t: float, config: EvalConfig = DEFAULT_CONFIG) -> float:
    """Real analogue of Hardy's Z-function; its sign changes are critical zeros.

    The rotation factor e^{pi t / 2} cancels the Gamma decay analytically, so no
    separate phase from log-Gamma is needed.
    """
    t = float(t)
    _check_point(complex(0.5, t), config)
    if config.precision == "extended":
        return hardy_f(form, t, config).real
    w, _ = evaluator(form, config).hardy(abs(t))
    return w if t >= 0 else w * math.exp(math.pi * t)


def hardy_w_err(form: QuadraticForm, t: float, config: EvalConfig = DEFAULT_CONFIG) -> tuple[float, float]:
    """W(t) with its rounding estimate (double precision, t >= 0)."""
    t = float(t)
    _check_point(complex(0.5, t), config)
    if t < 0:
        raise DomainError("hardy_w_err is defined for t >= 0")
    return evaluator(form, config).hardy(t)


def chi(s: complex) -> complex:
    """chi(s) = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s), from zeta(s) = chi(s) zeta(1-s)."""
    s = complex(s)
    if s.imag == 0 and s.real <= 0 and s.real == math.floor(s.real) and s.real % 2 == 0:
        # sin(pi s/2) vanishes while Gamma(1-s) is finite
        return 0j
    k = round(s.real)
    if k >= 1 and k % 2 == 1 and abs(s - k) < 1e-6:
        raise DomainError(f"chi has a pole at s = {k}")
    if s.real <= 0.5:
        log_val = (s * math.log(2) + (s - 1) * math.log(math.pi)
                   + log_sin(math.pi * s / 2) + loggamma(1 - s))
        return cmath.exp(log_val)
    # Gamma(1-s) sin(pi s/2) = pi / (2 Gamma(s) cos(pi s/2)) removes the even-integer poles
    log_cos = log_sin(math.pi * s / 2 + math.pi / 2)
    log_val = (s - 1) * math.log(2) + s * math.log(math.pi) - loggamma(s) - log_cos
    return cmath.exp(log_val)


@dataclass(frozen=True)
class ApproxValue:
    value: complex
    error_scale: float  # t X^{-1/2}
    X: float


def approx_critical_line(form: QuadraticForm, t: float, X: float,
                         config: EvalConfig = DEFAULT_CONFIG,
                         budget: int | None = None) -> ApproxValue:
    """Smoothed Dirichlet polynomial for zeta_Q(1/2 + it) of length 2X.

    Weights are 1 up to X and log(2X/n)/log 2 on (X, 2X]. The weight's Mellin
    transform picks up the pole at s = 1, which is subtracted as
    (2 pi/sqrt(Delta)) ((2X)^{1-s} - X^{1-s}) / ((1-s)^2 log 2).
    """
    t, X = float(t), float(X)
    if t < 2:
        raise DomainError(f"t must be >= 2, got {t}")
    if X < t * t:
        raise DomainError(f"X must be >= t^2 = {t * t}, got {X}")
    N = int(math.floor(2 * X))
    limit = budget if budget is not None else config.max_terms
    if N > limit:
        raise DomainError(f"2X = {2 * X} exceeds the rep-count budget {limit}")
    s = complex(0.5, t)
    ns, rs = cached_rep_counts(form, N).support()
    nf = ns.astype(float)
    terms = rs * np.exp(-s * np.log(nf))
    weights = np.where(nf <= X, 1.0, np.log(2 * X / nf) / math.log(2))
    total = complex(np.sum(weights * terms))
    one_s = 1 - s
    pole = (2 * math.pi / math.sqrt(form.disc)) / math.log(2) * (
        (2 * X) ** one_s - X ** one_s) / one_s ** 2
    return ApproxValue(total - pole, t / math.sqrt(X), X)
