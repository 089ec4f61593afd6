"""Named invariant suites. Every check reports value, bound, pass and a measured constant."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Callable

import numpy as np

from . import analysis as an
from .qform import QuadraticForm, gauss_sum
from .zeros import scan_zeros
from .zeta import DEFAULT_CONFIG, EvalConfig, evaluator, hardy_f, zeta_q

DEFAULT_SEED = 20240611
DEFAULT_FORMS = (QuadraticForm(1, 0, 1), QuadraticForm(1, 1, 1), QuadraticForm(1, 0, 57))


@dataclass
class Check:
    check_name: str
    value: float
    bound: float
    passed: bool
    measured_constant: float | None = None

    def to_record(self) -> dict:
        d = asdict(self)
        d["pass"] = bool(d.pop("passed"))
        for k in ("value", "bound", "measured_constant"):
            if d[k] is not None:
                d[k] = float(d[k])
        return d


def _le(name, value, bound, measured=None) -> Check:
    return Check(name, float(value), float(bound), bool(value <= bound), measured)


def functional_equation(forms, rng, config: EvalConfig, n: int = 100) -> list[Check]:
    out = []
    for form in forms:
        worst = 0.0
        ok = True
        for _ in range(n):
            s = complex(rng.uniform(-1, 2), rng.uniform(-200, 200))
            a = zeta_q(form, s, config)
            b = zeta_q(form, 1 - s, config)
            # both sides share the scale e^{pi |t|/2}
            resid = abs(a.lam_scaled - b.lam_scaled)
            tol = 10 * max(a.est_err_scaled, b.est_err_scaled)
            ok &= resid <= tol
            worst = max(worst, resid / tol)
        out.append(Check(f"functional-equation[{form}]", worst, 1.0, ok, worst))
    return out


def realness(forms, rng, config: EvalConfig, n: int = 200) -> list[Check]:
    out = []
    for form in forms:
        worst = 0.0
        for t in rng.uniform(1, 500, n):
            f = hardy_f(form, t, config)
            worst = max(worst, abs(f.imag) / max(1.0, abs(f.real)))
        out.append(_le(f"realness[{form}]", worst, 1e-8, worst))
    return out


def gauss_bound(forms, rng, config: EvalConfig, kmax: int = 50) -> list[Check]:
    out = []
    for form in forms:
        worst = 0.0
        for k in range(1, kmax + 1):
            bound = math.gcd(form.disc, k) * k
            for h in range(1, k + 1) if k > 1 else (1,):
                if math.gcd(h, k) == 1:
                    worst = max(worst, abs(gauss_sum(form, k, h)) / bound)
        out.append(_le(f"gauss-bound[{form}]", worst, 1.0 + 1e-9, worst))
    return out


def oscillatory(forms, rng, config: EvalConfig) -> list[Check]:
    out = []
    for p in an.load_family():
        r = an.oscillatory_bound_check(p)
        out.append(Check(f"oscillatory[{p.name}]", r.integral_mod, r.bound, r.passed, r.integral_mod * p.m / 4))
    return out


def cf_approx_suite(forms, rng, config: EvalConfig) -> list[Check]:
    out = []
    for delta in (3, 228):
        cs = an.convergents(delta, 20)
        worst = max(c.err_h2 for c in cs)
        low = min(c.err_h2 for c in cs)
        coprime = all(math.gcd(c.h, c.k) == 1 for c in cs)
        out.append(Check(f"cf-approx[{delta}]", worst, 1.0, bool(worst <= 1 and low > 0 and coprime), low))
    return out


def _rel_fd(f: Callable[[float], float], fp: Callable[[float], float], x: float) -> float:
    h = 1e-5 * max(1.0, abs(x))
    fd = (f(x + h) - f(x - h)) / (2 * h)
    d = fp(x)
    return abs(fd - d) / max(abs(d), 1e-300)


def phi_deriv_suite(forms, rng, config: EvalConfig) -> list[Check]:
    xs = np.linspace(0.05, 10, 200)
    worst_phi = max(_rel_fd(an.phi, an.phi_deriv, x) for x in xs)
    worst_F = 0.0
    for C2, m, n in ((0.5, 2, 1), (0.1, 9, 4), (1.0, 1, 3)):
        for x in np.linspace(50, 100, 51):
            worst_F = max(worst_F, _rel_fd(lambda v: an.phase_F(C2, m, n, v),
                                           lambda v: an.phase_deriv_F(C2, m, n, v), x))
    return [_le("phi-deriv[phi]", worst_phi, 1e-6, worst_phi), _le("phi-deriv[F]", worst_F, 1e-6, worst_F)]


def mean_square(forms, rng, config: EvalConfig) -> list[Check]:
    out = []
    for form in forms:
        ratios = [an.mean_square_coeffs(form, x) / x ** 1.2 for x in (1e3, 1e4, 1e5)]
        C = ratios[0]
        ok = all(b <= a * (1 + 1e-12) for a, b in zip(ratios, ratios[1:])) and ratios[-1] <= C
        out.append(Check(f"mean-square[{form}]", ratios[-1], C, bool(ok), C))
    return out


def power_mean(forms, rng, config: EvalConfig, T: float = 500.0) -> list[Check]:
    out = []
    H = math.log(T) ** 2
    for form in forms[:2]:
        val = an.first_power_mean(form, T, H, config)
        out.append(Check(f"power-mean[{form}]", val, 0.1 * H, bool(val >= 0.1 * H), val / H))
    return out


def smoothing_identity(forms, rng, config: EvalConfig) -> list[Check]:
    out = []
    p = an.make_smoothing(1e4, 10.0, 0.1)
    ident = max(abs(p.L - 8 * math.sqrt(math.log(p.T))) / p.L, abs(p.G * p.L - p.V) / p.V,
                abs(p.V * p.Y - p.T ** (1 + p.eps)) / p.T ** (1 + p.eps))
    out.append(_le("smoothing-identity[params]", ident, 1e-14, ident))

    worst_eta = 0.0
    for J in (2, 3, 5):
        worst_eta = max(worst_eta, eta_edge_residual(J))
    out.append(_le("smoothing-identity[eta]", worst_eta, 1e-8, worst_eta))

    form = forms[0]
    zs = [z.t for z in scan_zeros(form, 0.0, 60.0, config)]
    gaps = sorted(zip(np.diff([0.0] + zs), [0.0] + zs[:-1]), reverse=True)[:3]
    worst_eq = 0.0
    for width, start in gaps:
        hw = 0.45 * width
        i1, i2 = an.gaussian_window_integrals(form, start + width / 2, hw, hw / 2, config)
        worst_eq = max(worst_eq, abs(i1 - abs(i2)) / i1)
    out.append(_le("smoothing-identity[zero-free]", worst_eq, 1e-6, worst_eq))

    gap_min = 1.0
    for z in zs[:3]:
        i1, i2 = an.gaussian_window_integrals(form, z, 0.5, 0.5, config)
        gap_min = min(gap_min, (i1 - abs(i2)) / i1)
    out.append(Check("smoothing-identity[straddle]", gap_min, 0.0, bool(gap_min > 0), gap_min))
    return out


def eta_edge_residual(J: int) -> float:
    """Largest |S^(k)| over k = 1..J-1 at both band ends, where S is the band
    polynomial, together with its mismatch against eta_weight on the band."""
    S = an.eta_band_polynomial(J)
    worst = 0.0
    for k in range(1, J):
        d = S.deriv(k)
        worst = max(worst, abs(d(0.0)), abs(d(1.0)))
    # eta on the left band [-2Y, -Y] is S((x + 2Y)/Y)
    for u in np.linspace(0, 1, 101):
        worst = max(worst, abs(an.eta_weight(-2.0 + u, 0.0, 1.0, J) - S(u)))
    return worst


SUITES: dict[str, Callable] = {
    "functional-equation": functional_equation,
    "realness": realness,
    "gauss-bound": gauss_bound,
    "oscillatory": oscillatory,
    "cf-approx": cf_approx_suite,
    "phi-deriv": phi_deriv_suite,
    "mean-square": mean_square,
    "power-mean": power_mean,
    "smoothing-identity": smoothing_identity,
}


def run_suite(name: str, forms=DEFAULT_FORMS, seed: int = DEFAULT_SEED,
              config: EvalConfig = DEFAULT_CONFIG) -> dict:
    fn = SUITES[name]
    rng = np.random.default_rng(seed)
    checks = fn(tuple(forms), rng, config)
    return {
        "schema": 1,
        "suite": name,
        "seed": seed,
        "checks": [c.to_record() for c in checks],
        "pass": all(c.passed for c in checks),
    }
