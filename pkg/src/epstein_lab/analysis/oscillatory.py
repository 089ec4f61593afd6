"""First-derivative test for oscillatory integrals.

If G/F' is monotonic and F'/G >= m > 0 (or <= -m) on [a, b], then
|int_a^b G e^{iF}| <= 4/m. The check certifies the hypotheses numerically and
integrates with panels no longer than a quarter of the local period.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from importlib import resources
from typing import Callable

import numpy as np

from ..errors import DomainError, QuadratureError
from .transform import amplitude_G, phase_deriv_F, phase_F

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(16)


@dataclass(frozen=True)
class OscillatoryProblem:
    F: Callable[[float], float]
    Fp: Callable[[float], float]
    G_amp: Callable[[float], float]
    a: float
    b: float
    m: float
    monotone_attested: bool = True
    name: str = ""

    def __post_init__(self):
        if not self.m > 0:
            raise DomainError("m must be positive")
        if not self.a < self.b:
            raise DomainError("need a < b")


@dataclass(frozen=True)
class OscillatoryResult:
    integral_mod: float
    bound: float
    passed: bool
    panels: int


def check_hypotheses(p: OscillatoryProblem, samples: int = 4001) -> None:
    """Raise DomainError unless F'/G keeps |F'/G| >= m with one sign and G/F' is monotone."""
    if not p.monotone_attested:
        raise DomainError(f"{p.name or 'problem'}: monotonicity of G/F' not attested")
    x = np.linspace(p.a, p.b, samples)
    fp = np.array([p.Fp(v) for v in x])
    g = np.array([p.G_amp(v) for v in x])
    if np.any(g == 0) or np.any(fp == 0):
        raise DomainError(f"{p.name or 'problem'}: F' or G vanishes on [a, b]")
    ratio = fp / g
    if not (np.all(ratio >= p.m * (1 - 1e-12)) or np.all(ratio <= -p.m * (1 - 1e-12))):
        raise DomainError(f"{p.name or 'problem'}: |F'/G| >= m fails (min |F'/G| = {np.min(np.abs(ratio)):.6g})")
    inv = g / fp
    d = np.diff(inv)
    tol = 1e-12 * np.max(np.abs(inv))
    if not (np.all(d >= -tol) or np.all(d <= tol)):
        raise DomainError(f"{p.name or 'problem'}: G/F' is not monotone")


def oscillatory_integral(F, Fp, G_amp, a: float, b: float, max_panels: int = 2_000_000) -> tuple[complex, int]:
    """int_a^b G e^{iF} with 16-point Gauss-Legendre panels of at most a quarter local period."""
    total = 0j
    x = a
    panels = 0
    while x < b:
        w = abs(Fp(x))
        h = min(b - x, 0.5 * math.pi / w if w > 0 else b - x, (b - a) / 8)
        # shrink until the derivative at the panel end agrees in scale
        while h > 1e-14 and abs(Fp(x + h)) * h > 0.5 * math.pi * 1.5:
            h *= 0.5
        u = x + 0.5 * h * (_NODES + 1)
        vals = np.array([G_amp(v) * complex(math.cos(F(v)), math.sin(F(v))) for v in u])
        total += 0.5 * h * np.dot(_WEIGHTS, vals)
        x += h
        panels += 1
        if panels > max_panels:
            raise QuadratureError(f"more than {max_panels} panels needed")
    return total, panels


def oscillatory_bound_check(p: OscillatoryProblem) -> OscillatoryResult:
    check_hypotheses(p)
    val, panels = oscillatory_integral(p.F, p.Fp, p.G_amp, p.a, p.b)
    bound = 4.0 / p.m
    mod = abs(val)
    return OscillatoryResult(mod, bound, mod <= bound, panels)


# ---------------------------------------------------------------- families

def _quadratic(gamma: float, a: float, b: float, name: str) -> OscillatoryProblem:
    return OscillatoryProblem(
        F=lambda x: gamma * x * x, Fp=lambda x: 2 * gamma * x, G_amp=lambda x: 1.0,
        a=a, b=b, m=2 * gamma * a, name=name)


def _cubic(gamma: float, beta: float, a: float, b: float, name: str) -> OscillatoryProblem:
    # G = (1 + x)^{-1/2} decreases while F' increases, so G/F' decreases
    return OscillatoryProblem(
        F=lambda x: gamma * x ** 3 + beta * x, Fp=lambda x: 3 * gamma * x * x + beta,
        G_amp=lambda x: (1 + x) ** -0.5, a=a, b=b,
        m=(3 * gamma * a * a + beta) * math.sqrt(1 + a), name=name)


def _transform(C2: float, m: float, n: float, T: float, name: str) -> OscillatoryProblem:
    a, b = T / 2, T
    xs = np.linspace(a, b, 4001)
    # measured m_eff = min |F'/G| over the interval
    m_eff = float(min(abs(phase_deriv_F(C2, m, n, x)) / amplitude_G(C2, m, n, x) for x in xs))
    return OscillatoryProblem(
        F=lambda x: phase_F(C2, m, n, x), Fp=lambda x: phase_deriv_F(C2, m, n, x),
        G_amp=lambda x: amplitude_G(C2, m, n, x), a=a, b=b, m=m_eff * (1 - 1e-9), name=name)


def load_family(path=None) -> list[OscillatoryProblem]:
    """Build the problems described by the declarative case list (JSON)."""
    if path is None:
        text = resources.files(__package__).joinpath("oscillatory_cases.json").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    out = []
    for case in json.loads(text)["cases"]:
        kind = case["kind"]
        name = case.get("name", kind)
        if kind == "quadratic":
            out.append(_quadratic(case["gamma"], case["a"], case["b"], name))
        elif kind == "cubic":
            out.append(_cubic(case["gamma"], case["beta"], case["a"], case["b"], name))
        elif kind == "transform":
            out.append(_transform(case["C2"], case["m"], case["n"], case["T"], name))
        else:
            raise DomainError(f"unknown phase kind {kind!r}")
    return out
