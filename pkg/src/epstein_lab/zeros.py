"""Critical-line zeros as sign changes of W(t), zero counts and gap statistics."""

from __future__ import annotations

import bisect
import csv
import json
import logging
import math
import multiprocessing
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, NamedTuple

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import DomainError
from .qform import QuadraticForm, stark_k
from .zeta import DEFAULT_CONFIG, EvalConfig, evaluator, hardy_w, zeta_q

log = logging.getLogger(__name__)

STEP_BASE = 0.2
REFINE_TOL = 1e-9
CHUNK = 8.0
# |direct count - main term| <= STARK_BAND_C * h(T + 3) is treated as consistent
STARK_BAND_C = 25.0


@dataclass(frozen=True, order=True)
class ZeroRecord:
    t: float
    bracket: float = field(compare=False)
    sign_left: int = field(compare=False)
    sign_right: int = field(compare=False)

    def __post_init__(self):
        if self.sign_left * self.sign_right >= 0:
            raise DomainError(f"zero at {self.t}: bracket end signs must differ")


@dataclass
class GapTable:
    form: QuadraticForm
    T: float
    zeros: list[ZeroRecord]

    def __post_init__(self):
        self.zeros = sorted(z for z in self.zeros if 0 <= z.t <= self.T)
        ts = [z.t for z in self.zeros]
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise DomainError("zero ordinates must be strictly increasing")

    @property
    def gaps(self) -> np.ndarray:
        return np.diff(np.array([z.t for z in self.zeros], dtype=float))


def gap_stats(table: GapTable, V: float) -> int:
    """R(V): number of consecutive-zero gaps of length at least V."""
    if not V > 0:
        raise DomainError(f"V must be positive, got {V}")
    return int(np.count_nonzero(table.gaps >= V))


class StarkPrediction(NamedTuple):
    main: float
    error_scale: float


def stark_h(x: float) -> float:
    lx = math.log(x)
    return lx ** (1 / 3) * math.log(lx) ** (1 / 6)


def stark_prediction(form: QuadraticForm, T: float) -> StarkPrediction:
    """(T/pi) log(kT/(pi e)) and the error weight h(T+3)."""
    if T < 3:
        raise DomainError(f"T must be >= 3, got {T}")
    k = stark_k(form)
    main = T / math.pi * math.log(k * T / (math.pi * math.e))
    return StarkPrediction(main, stark_h(T + 3))


def grid_step(form: QuadraticForm, t: float, step_base: float = STEP_BASE) -> float:
    return step_base / max(1.0, math.log(max(stark_k(form) * t, 1e-300)))


def refine_bracket(f: Callable[[float], float], lo: float, hi: float, flo: float, fhi: float,
                   tol: float = REFINE_TOL, maxiter: int = 200) -> tuple[float, float, float, float]:
    """Shrink a sign-change bracket to width <= 2 tol.

    Illinois regula falsi with a bisection step whenever the bracket fails to
    halve; returns the final (lo, hi, f(lo), f(hi)).
    """
    side = 0
    for _ in range(maxiter):
        width = hi - lo
        if width <= 2 * tol:
            break
        c = (lo * fhi - hi * flo) / (fhi - flo)
        if not lo < c < hi:
            c = 0.5 * (lo + hi)
        # keep c off the ends so the bracket always shrinks
        c = min(max(c, lo + 0.25 * tol), hi - 0.25 * tol)
        fc = f(c)
        if fc == 0:
            return c, c, fc, fc
        if (fc > 0) == (flo > 0):
            lo, flo = c, fc
            if side == -1:
                fhi *= 0.5
            side = -1
        else:
            hi, fhi = c, fc
            if side == 1:
                flo *= 0.5
            side = 1
        if hi - lo > 0.5 * width:
            m = 0.5 * (lo + hi)
            fm = f(m)
            if fm == 0:
                return m, m, fm, fm
            if (fm > 0) == (flo > 0):
                lo, flo = m, fm
            else:
                hi, fhi = m, fm
            side = 0
    return lo, hi, flo, fhi


def _sign(x: float) -> int:
    return 1 if x > 0 else (-1 if x < 0 else 0)


@dataclass
class ChunkResult:
    zeros: list[ZeroRecord]
    evaluations: int
    probes: int
    probe_hits: int


def _scan_chunk(form: QuadraticForm, c0: float, c1: float, config: EvalConfig,
                step_base: float, tol: float, probe_dips: bool, lo_limit: float,
                hi_limit: float) -> ChunkResult:
    ev = evaluator(form, config)

    def W(t):
        return ev.hardy(t)[0] if t >= 0 else hardy_w(form, t, config)

    calls = 0

    def W_counted(t):
        nonlocal calls
        calls += 1
        return W(t)

    dt0 = grid_step(form, c1, step_base)
    n = max(1, math.ceil((c1 - c0) / dt0 - 1e-9))
    dt = (c1 - c0) / n
    # one guard point on each side for dip detection at chunk ends
    first = c0 - dt if c0 - dt >= lo_limit else c0
    last_extra = c1 + dt <= hi_limit
    npts = n + 1 + (first < c0) + last_extra
    if first >= 0:
        vals = ev.hardy_uniform(first, dt, npts)
    else:
        vals = np.array([W(first + k * dt) for k in range(npts)])
    ts = first + dt * np.arange(npts)
    calls += npts
    off = 1 if first < c0 else 0
    ts[off] = c0
    ts[off + n] = c1

    brackets = []
    for k in range(off, off + n):
        a, b = vals[k], vals[k + 1]
        if a == 0:
            # zero on a grid point: re-sample half a step either side
            if k == off and c0 > lo_limit:
                continue
            l, r = ts[k] - dt / 2, ts[k] + dt / 2
            fl, fr = W_counted(l), W_counted(r)
            if fl * fr < 0:
                brackets.append((l, r, fl, fr))
            continue
        if b != 0 and (a > 0) != (b > 0):
            brackets.append((ts[k], ts[k + 1], a, b))

    probes = hits = 0
    if probe_dips:
        for k in range(max(1, off), off + n):
            a, m, b = vals[k - 1], vals[k], vals[k + 1]
            if m == 0 or not (a * m > 0 and m * b > 0):
                continue
            if not (abs(m) < abs(a) and abs(m) <= abs(b)):
                continue
            probes += 1
            sgn = 1.0 if m > 0 else -1.0
            res = minimize_scalar(lambda t: sgn * W_counted(t), bounds=(ts[k - 1], ts[k + 1]),
                                  method="bounded", options={"xatol": 1e-7 * dt, "maxiter": 40})
            if res.fun < 0:
                hits += 1
                tm, fm = float(res.x), sgn * float(res.fun)
                brackets.append((ts[k - 1], tm, a, fm))
                brackets.append((tm, ts[k + 1], fm, b))
                log.debug("dip at %.6f hides a zero pair", tm)

    zeros = []
    for lo, hi, flo, fhi in brackets:
        lo, hi, flo, fhi = refine_bracket(W_counted, lo, hi, flo, fhi, tol)
        sl, sr = _sign(flo), _sign(fhi)
        if sl == 0 or sr == 0:
            sl, sr = _sign(W_counted(lo - tol)), _sign(W_counted(hi + tol))
        zeros.append(ZeroRecord(float(0.5 * (lo + hi)), float(0.5 * (hi - lo)), sl, sr))
    return ChunkResult(zeros, calls, probes, hits)


def _chunks(t0: float, t1: float, chunk: float, form: QuadraticForm, config: EvalConfig) -> list[tuple[float, float]]:
    """Chunks on a global lattice of multiples of ``chunk``, also split at
    evaluator bucket edges so every chunk uses a single theta grid."""
    ev = evaluator(form, config)
    cuts = {t0, t1}
    k = math.floor(t0 / chunk) + 1
    while k * chunk < t1:
        cuts.add(k * chunk)
        k += 1
    b = 0
    while True:
        edge = ev.bucket_height(b)
        if edge >= t1:
            break
        if edge > t0:
            cuts.add(edge)
        b += 1
    pts = sorted(cuts)
    return list(zip(pts, pts[1:]))


def _merge(zeros: list[ZeroRecord], tol: float) -> list[ZeroRecord]:
    out: list[ZeroRecord] = []
    for z in sorted(zeros):
        if out and z.t - out[-1].t <= 4 * tol:
            if z.bracket < out[-1].bracket:
                out[-1] = z
            continue
        out.append(z)
    return out


def _worker(args):
    return _scan_chunk(*args)


def scan_zeros(form: QuadraticForm, t0: float, t1: float, config: EvalConfig = DEFAULT_CONFIG,
               step_base: float = STEP_BASE, tol: float = REFINE_TOL, workers: int = 1,
               probe_dips: bool = True, chunk: float = CHUNK) -> list[ZeroRecord]:
    """All sign changes of W on [t0, t1], each refined to a bracket of half-width <= tol.

    The grid step is step_base / max(1, log(k t)). Local minima of |W| between
    same-signed samples are minimised directly, which recovers zero pairs closer
    than the grid step. Completeness is statistical, not certified.
    """
    t0, t1 = float(t0), float(t1)
    if t0 < 0 or t1 < t0:
        raise DomainError(f"bad range [{t0}, {t1}]")
    if t1 > config.reliable_height:
        raise DomainError(f"t1 = {t1} exceeds the reliable height {config.reliable_height}")
    if t1 == t0:
        return []
    pieces = _chunks(t0, t1, chunk, form, config)
    jobs = [(form, a, b, config, step_base, tol, probe_dips, 0.0, config.reliable_height)
            for a, b in pieces]
    if workers > 1 and len(jobs) > 1:
        ev = evaluator(form, config)
        for b in range(ev.bucket(t1) + 1):
            ev.grid(b)  # built once, inherited by forked workers
        ctx = multiprocessing.get_context("fork")
        with ProcessPoolExecutor(max_workers=workers, mp_context=ctx) as pool:
            results = list(pool.map(_worker, jobs, chunksize=max(1, len(jobs) // (8 * workers))))
    else:
        results = [_scan_chunk(*job) for job in jobs]
    zeros = _merge([z for r in results for z in r.zeros], tol)
    zeros = [z for z in zeros if t0 <= z.t <= t1]
    probes = sum(r.probes for r in results)
    hits = sum(r.probe_hits for r in results)
    log.info("scan [%g, %g]: %d zeros, %d evaluations, %d dips probed, %d hidden pairs",
             t0, t1, len(zeros), sum(r.evaluations for r in results), probes, hits)
    if t0 <= 1e-12 and t1 >= 3:
        pred = stark_prediction(form, t1)
        if abs(len(zeros) - pred.main) > STARK_BAND_C * pred.error_scale:
            warnings.warn(f"zero count {len(zeros)} on [0, {t1}] is outside the Stark band "
                          f"{pred.main:.1f} +- {STARK_BAND_C * pred.error_scale:.1f}", stacklevel=2)
    return zeros


def real_zero_in_unit_interval(form: QuadraticForm, config: EvalConfig = DEFAULT_CONFIG,
                               samples: int = 200, tol: float = 1e-15) -> float | None:
    """A real zero of zeta_Q in (1/2, 1), or None if zeta_Q keeps one sign there."""

    def Z(sig):
        return zeta_q(form, complex(sig, 0.0), config).zeta.real

    grid = np.linspace(0.5, 1 - 1e-6, samples)
    vals = [Z(s) for s in grid]
    for k in range(samples - 1):
        a, b = vals[k], vals[k + 1]
        if a == 0 and grid[k] > 0.5:
            return float(grid[k])
        if a * b < 0:
            lo, hi, flo, fhi = refine_bracket(Z, grid[k], grid[k + 1], a, b, tol)
            root = lo if abs(flo) <= abs(fhi) else hi
            if 0.5 < root < 1:
                return float(root)
    return None


# ---------------------------------------------------------------- persistence

def save_zero_table(path, form: QuadraticForm, zeros: list[ZeroRecord],
                    ranges: list[tuple[float, float]], step_base: float = STEP_BASE) -> None:
    path = Path(path)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "bracket", "sign_left", "sign_right"])
        for z in zeros:
            writer.writerow([repr(z.t), repr(z.bracket), z.sign_left, z.sign_right])
    ranges = _union(ranges)
    lo, hi = ranges[0][0], ranges[-1][1]
    pred = stark_prediction(form, hi) if lo <= 1e-12 and hi >= 3 else None
    meta = {
        "schema": 1,
        "form": str(form),
        "range": [lo, hi],
        "ranges": [list(r) for r in ranges],
        "step_base": step_base,
        "count": len(zeros),
        "stark_prediction": pred.main if pred else None,
    }
    sidecar(path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")


def sidecar(path) -> Path:
    path = Path(path)
    return path.with_name(path.name + ".json")


def load_zero_table(path) -> tuple[QuadraticForm, list[ZeroRecord], list[tuple[float, float]]]:
    path = Path(path)
    meta = json.loads(sidecar(path).read_text())
    form = QuadraticForm.parse(meta["form"])
    zeros = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            zeros.append(ZeroRecord(float(row["t"]), float(row["bracket"]),
                                    int(row["sign_left"]), int(row["sign_right"])))
    ranges = [tuple(r) for r in meta.get("ranges", [meta["range"]])]
    return form, zeros, ranges


def _union(ranges):
    out = []
    for a, b in sorted((float(a), float(b)) for a, b in ranges):
        if out and a <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], b))
        else:
            out.append((a, b))
    return out


def uncovered(ranges, t0: float, t1: float) -> list[tuple[float, float]]:
    """Sub-intervals of [t0, t1] not covered by ``ranges``."""
    gaps, cur = [], t0
    for a, b in _union(ranges):
        if b <= cur:
            continue
        if a >= t1:
            break
        if a > cur:
            gaps.append((cur, min(a, t1)))
        cur = max(cur, b)
    if cur < t1:
        gaps.append((cur, t1))
    return gaps


def covers(ranges, t0: float, t1: float) -> bool:
    return not uncovered(ranges, t0, t1)


def merge_zero_sets(*sets: list[ZeroRecord], tol: float = REFINE_TOL) -> list[ZeroRecord]:
    return _merge([z for s in sets for z in s], tol)


def zeros_in(zeros: list[ZeroRecord], a: float, b: float) -> list[ZeroRecord]:
    ts = [z.t for z in zeros]
    return zeros[bisect.bisect_left(ts, a):bisect.bisect_right(ts, b)]
