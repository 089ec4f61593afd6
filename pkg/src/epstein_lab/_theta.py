"""Completed Epstein zeta via a rotated theta-Mellin integral.

With theta(u) = sum_n r_Q(n) exp(-alpha n u), alpha = 2 pi / sqrt(Delta), and
theta(u) = theta(1/u) / u for Re u > 0, integrating along the ray
u = v e^{i phi} and splitting at v = 1 gives, for every |phi| < pi/2,

    Lambda(s) = e^{i phi (s-1)}/(s-1) - e^{i phi s}/s
                + e^{i phi s} I(s) + e^{-i phi (1-s)} conj(I)(1-s),
    I(s) = int_0^inf (theta(e^{x + i phi}) - 1) e^{s x} dx.

phi = 0 is the classical incomplete-gamma expansion. At height t the
unrotated terms are e^{pi t / 2} times larger than Lambda; rotating to
phi = pi/2 - c/H keeps the loss below e^c for t <= H. Heights are grouped in
dyadic buckets, one tabulated theta grid per bucket.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass

import numpy as np

from .qform import QuadraticForm, cached_rep_counts

EPS = np.finfo(float).eps
# sigma range a grid is built for: -SIGMA_SPAN + 1 <= Re s <= SIGMA_SPAN
SIGMA_SPAN = 4.0
# multiplier on the root-sum-square rounding model
ROUNDING_SAFETY = 10.0


@dataclass(frozen=True)
class ThetaGrid:
    phi: float
    height: float
    x: np.ndarray
    ex: np.ndarray
    a: np.ndarray  # w_j (theta(e^{x_j + i phi}) - 1)
    a_err: np.ndarray  # rounding scale of a_j (root-sum-square over the theta terms)
    trunc: float  # bound on the neglected theta terms, after e^{sigma x} growth


def _gauss_legendre_panels(X: float, h: float, order: int) -> tuple[np.ndarray, np.ndarray]:
    npanel = max(1, math.ceil(X / h))
    h = X / npanel
    nodes, weights = np.polynomial.legendre.leggauss(order)
    left = np.arange(npanel) * h
    x = (left[:, None] + 0.5 * h * (nodes[None, :] + 1.0)).ravel()
    w = np.broadcast_to(0.5 * h * weights, (npanel, order)).ravel().copy()
    return x, w


def build_grid(form: QuadraticForm, phi: float, height: float, cutoff: float,
               order: int = 20, density: float = 1.0) -> ThetaGrid:
    alpha = 2 * math.pi / math.sqrt(form.disc)
    ceps = math.cos(phi)
    sphi = math.sin(phi)
    # upper limit: alpha e^X cos(phi) - SIGMA_SPAN X >= cutoff
    X = 1.0
    for _ in range(50):
        X = math.log((cutoff + SIGMA_SPAN * X + 5.0) / (alpha * ceps))
    X = max(X, 1.0)
    omega = cutoff / ceps + height + SIGMA_SPAN
    x, w = _gauss_legendre_panels(X, density * order / omega, order)
    ex = np.exp(x)

    nmax0 = (cutoff + 5.0 + SIGMA_SPAN * x[0]) / (alpha * ex[0] * ceps)
    table = cached_rep_counts(form, max(16, int(nmax0) + 1))
    ns, rs = table.support()
    ns = ns.astype(float)
    rs = rs.astype(float)

    a = np.empty(x.size, dtype=complex)
    a_err = np.empty(x.size)
    block = 256
    for j0 in range(0, x.size, block):
        j1 = min(x.size, j0 + block)
        # terms below e^{-cutoff} even after the e^{sigma x} growth are dropped
        nmax = (cutoff + 5.0 + SIGMA_SPAN * x[j1 - 1]) / (alpha * ex[j0] * ceps)
        K = int(np.searchsorted(ns, nmax, side="right"))
        if K == 0:
            a[j0:j1] = 0
            a_err[j0:j1] = 0
            continue
        nk = ns[:K, None]
        mag = np.exp(-alpha * nk * (ex[None, j0:j1] * ceps))
        phase = np.exp(-1j * (alpha * nk) * (ex[None, j0:j1] * sphi))
        a[j0:j1] = rs[:K] @ (mag * phase)
        # each term carries a phase error ~ eps * |argument|
        a_err[j0:j1] = np.sqrt((rs[:K] ** 2) @ (mag * (1.0 + alpha * nk * ex[None, j0:j1])) ** 2)
    a *= w
    a_err *= EPS * w
    trunc = float(np.sum(w)) * math.exp(-cutoff) * 10.0
    return ThetaGrid(phi, height, x, ex, a, a_err, trunc)


class LambdaEvaluator:
    """Evaluates e^{pi |t|/2} Lambda(s) for one form, caching one grid per bucket."""

    def __init__(self, form: QuadraticForm, margin: float = 4.0, cutoff: float = 37.0,
                 order: int = 20, density: float = 1.0):
        self.form = form
        self.margin = margin
        self.cutoff = cutoff
        self.order = order
        self.density = density
        self.base = 2 * margin / math.pi
        self._grids: dict[int, ThetaGrid] = {}
        self._lock = threading.Lock()

    def bucket(self, t: float) -> int:
        t = abs(t)
        if t <= self.base:
            return 0
        return math.ceil(math.log2(t / self.base) - 1e-12)

    def bucket_height(self, b: int) -> float:
        return self.base * 2.0 ** b

    def grid(self, b: int) -> ThetaGrid:
        g = self._grids.get(b)
        if g is None:
            with self._lock:
                g = self._grids.get(b)
                if g is None:
                    H = self.bucket_height(b)
                    phi = 0.0 if b == 0 else math.pi / 2 - self.margin / H
                    g = build_grid(self.form, phi, H, self.cutoff, self.order, self.density)
                    self._grids[b] = g
        return g

    def scaled(self, s: complex) -> tuple[complex, float]:
        """(e^{pi|t|/2} Lambda(s), absolute error estimate of that quantity)."""
        s = complex(s)
        if s.imag < 0:
            val, err = self.scaled(s.conjugate())
            return val.conjugate(), err
        sig, t = s.real, s.imag
        g = self.grid(self.bucket(t))
        phi = g.phi
        e = np.exp(s * g.x)
        e2 = g.ex / e
        S1 = np.dot(g.a, e)
        S2 = np.dot(g.a.conj(), e2)
        rot1 = complex(math.cos(phi * sig), math.sin(phi * sig))
        rot2 = complex(math.cos(phi * (1 - sig)), -math.sin(phi * (1 - sig)))
        rot0 = complex(math.cos(phi * (sig - 1)), math.sin(phi * (sig - 1)))
        lam = rot0 / (s - 1) - rot1 / s + rot1 * S1 + rot2 * S2
        growth = 1.0 + abs(s) * g.x
        amp = np.abs(g.a) * growth * EPS
        r1 = np.hypot(g.a_err, amp) * np.abs(e)
        r2 = np.hypot(g.a_err, amp) * np.abs(e2)
        rounding = math.sqrt(np.dot(r1, r1) + np.dot(r2, r2))
        err = ROUNDING_SAFETY * rounding + 4 * EPS * (abs(1 / (s - 1)) + abs(1 / s)) + g.trunc
        scale = math.exp((math.pi / 2 - phi) * t)
        return lam * scale, err * scale

    def hardy(self, t: float) -> tuple[float, float]:
        """(W(t), error estimate) for t >= 0 via the real form on the critical line."""
        s = complex(0.5, t)
        g = self.grid(self.bucket(t))
        phi = g.phi
        e = np.exp(s * g.x)
        S1 = np.dot(g.a, e)
        rot = complex(math.cos(phi / 2), math.sin(phi / 2))
        lam = 2.0 * (rot * (S1 - 1 / s)).real
        amp = np.abs(g.a) * (1.0 + abs(s) * g.x) * EPS
        r1 = np.hypot(g.a_err, amp) * np.sqrt(g.ex)
        err = 2 * ROUNDING_SAFETY * math.sqrt(np.dot(r1, r1)) + 4 * EPS / abs(s) + g.trunc
        scale = math.exp((math.pi / 2 - phi) * t)
        return lam * scale, err * scale

    def hardy_uniform(self, t0: float, dt: float, n: int, reseed: int = 64) -> np.ndarray:
        """W at t0 + k dt, k < n, for t0 >= 0; the e^{itx} factors follow a
        multiplicative recurrence that is re-seeded every ``reseed`` steps."""
        out = np.empty(n)
        k = 0
        while k < n:
            t = t0 + k * dt
            b = self.bucket(t)
            # run until the bucket changes or the reseed interval ends
            stop = k + 1
            while stop < n and stop - k < reseed and self.bucket(t0 + stop * dt) == b:
                stop += 1
            g = self.grid(b)
            phi = g.phi
            rot = complex(math.cos(phi / 2), math.sin(phi / 2))
            amp = g.a * np.sqrt(g.ex)
            e = np.exp(1j * t * g.x)
            step = np.exp(1j * dt * g.x)
            for j in range(k, stop):
                tj = t0 + j * dt
                S1 = np.dot(amp, e)
                lam = 2.0 * (rot * (S1 - 1 / complex(0.5, tj))).real
                out[j] = lam * math.exp((math.pi / 2 - phi) * tj)
                e *= step
            k = stop
        return out
