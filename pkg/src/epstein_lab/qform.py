"""Positive-definite binary quadratic forms Q(x, y) = a x^2 + b xy + c y^2.

Discriminants here follow the positive convention Delta = 4ac - b^2.
"""

from __future__ import annotations

import csv
import math
import threading
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DomainError, ResourceError

# Largest table (entries) rep_counts will allocate.
REP_COUNT_BUDGET = 50_000_000


@dataclass(frozen=True, order=True)
class QuadraticForm:
    a: int
    b: int
    c: int

    def __post_init__(self):
        for name in ("a", "b", "c"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
                raise DomainError(f"coefficient {name} must be an integer, got {value!r}")
            object.__setattr__(self, name, int(value))
        if self.a < 1:
            raise DomainError(f"a must be >= 1 for a positive definite form, got {self.a}")
        if 4 * self.a * self.c - self.b * self.b < 1:
            raise DomainError(f"form ({self.a},{self.b},{self.c}) is not positive definite")

    @classmethod
    def parse(cls, text: str) -> "QuadraticForm":
        """Parse the textual triple ``"a,b,c"``."""
        parts = [p.strip() for p in str(text).split(",")]
        if len(parts) != 3:
            raise DomainError(f"expected 'a,b,c', got {text!r}")
        try:
            a, b, c = (int(p) for p in parts)
        except ValueError:
            raise DomainError(f"non-integer coefficient in {text!r}") from None
        return cls(a, b, c)

    @property
    def disc(self) -> int:
        return 4 * self.a * self.c - self.b * self.b

    @property
    def square_disc(self) -> bool:
        d = self.disc
        return math.isqrt(d) ** 2 == d

    def __call__(self, x, y):
        return self.a * x * x + self.b * x * y + self.c * y * y

    def adjoint(self) -> "QuadraticForm":
        """The equivalent form Q(y, -x) = (c, -b, a)."""
        return QuadraticForm(self.c, -self.b, self.a)

    def __str__(self) -> str:
        return f"{self.a},{self.b},{self.c}"


def discriminant(form: QuadraticForm) -> int:
    return 4 * form.a * form.c - form.b * form.b


@dataclass(frozen=True)
class RepCountTable:
    """r_Q(n) for 0 <= n <= limit; ``counts[0]`` is 0 (the origin is excluded)."""

    form: QuadraticForm
    limit: int
    counts: np.ndarray = field(repr=False)

    def __post_init__(self):
        self.counts.setflags(write=False)

    def __getitem__(self, n):
        return self.counts[n]

    def support(self, upto: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """Arrays ``(n, r_Q(n))`` restricted to n with r_Q(n) > 0."""
        counts = self.counts if upto is None else self.counts[: int(upto) + 1]
        ns = np.flatnonzero(counts)
        return ns, counts[ns]

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["n", "r"])
            for n in range(1, self.limit + 1):
                writer.writerow([n, int(self.counts[n])])

    @classmethod
    def from_csv(cls, form: QuadraticForm, path) -> "RepCountTable":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        limit = int(rows[-1]["n"]) if rows else 0
        counts = np.zeros(limit + 1, dtype=np.int64)
        for row in rows:
            counts[int(row["n"])] = int(row["r"])
        return cls(form, limit, counts)


def rep_counts(form: QuadraticForm, N: int, budget: int = REP_COUNT_BUDGET) -> RepCountTable:
    """Count integer solutions of Q(x, y) = n for every 1 <= n <= N.

    For each x with 4cN - Delta x^2 >= 0 the admissible y form an interval
    whose ends come from an integer square root, so no lattice point is
    classified in floating point.
    """
    N = int(N)
    if N < 1:
        raise DomainError(f"N must be >= 1, got {N}")
    if N + 1 > budget:
        raise ResourceError(f"rep-count table of size {N} exceeds budget {budget}")
    a, b, c, d = form.a, form.b, form.c, form.disc
    counts = np.zeros(N + 1, dtype=np.int64)
    pending: list[np.ndarray] = []
    size = 0

    def flush():
        nonlocal size
        if pending:
            counts[:] += np.bincount(np.concatenate(pending), minlength=N + 1)
            pending.clear()
            size = 0

    xmax = math.isqrt(4 * c * N // d)
    for x in range(-xmax, xmax + 1):
        D = 4 * c * N - d * x * x
        if D < 0:
            continue
        r = math.isqrt(D)
        # -bx - r <= 2cy <= -bx + r
        lo = -((b * x + r) // (2 * c))
        hi = (r - b * x) // (2 * c)
        if lo > hi:
            continue
        y = np.arange(lo, hi + 1, dtype=np.int64)
        n = a * x * x + b * x * y + c * y * y
        n = n[(n >= 1) & (n <= N)]
        pending.append(n)
        size += n.size
        if size > 4 * (N + 1) or size > 1 << 22:
            flush()
    flush()
    return RepCountTable(form, N, counts)


_rep_cache: dict[QuadraticForm, RepCountTable] = {}
_rep_lock = threading.Lock()


def cached_rep_counts(form: QuadraticForm, N: int) -> RepCountTable:
    """Shared read-only table covering at least N; grows by doubling."""
    with _rep_lock:
        table = _rep_cache.get(form)
        if table is None or table.limit < N:
            size = max(int(N), 2 * table.limit if table is not None else 1024)
            table = rep_counts(form, size)
            _rep_cache[form] = table
    if table.limit == N:
        return table
    return RepCountTable(form, int(N), table.counts[: int(N) + 1].copy())


def gauss_sum(form: QuadraticForm, k: int, h: int) -> complex:
    """G_Q(k, h) = sum over x, y mod k of exp(2 pi i h Q(x, y) / k)."""
    k, h = int(k), int(h)
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    if math.gcd(h, k) != 1:
        raise DomainError(f"gcd(h, k) must be 1, got h={h}, k={k}")
    x = np.arange(k, dtype=np.int64)
    X, Y = np.meshgrid(x, x, indexing="ij")
    # exact residue of h Q(x, y) before any floating point
    res = (h * ((form.a * X * X + form.b * X * Y + form.c * Y * Y) % k)) % k
    hist = np.bincount(res.ravel(), minlength=k)
    phases = np.exp(2j * np.pi * np.arange(k) / k)
    return complex(np.dot(hist, phases))


def reduced_forms(disc: int) -> list[QuadraticForm]:
    """All reduced forms of discriminant -disc: |b| <= a <= c, b >= 0 if |b| = a or a = c."""
    disc = int(disc)
    if disc < 3 or disc % 4 not in (0, 3):
        raise DomainError(f"discriminant {disc} must be >= 3 and = 0 or 3 mod 4")
    forms = []
    amax = math.isqrt(disc // 3)
    for a in range(1, amax + 1):
        for b in range(-a, a + 1):
            num = b * b + disc
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if b < 0 and (-b == a or a == c):
                continue
            forms.append(QuadraticForm(a, b, c))
    return forms


def count_classes(disc: int, primitive: bool = False) -> int:
    """Number of reduced forms of discriminant -disc.

    With ``primitive=True`` only forms with gcd(a, b, c) = 1 are counted.
    """
    forms = reduced_forms(disc)
    if primitive:
        forms = [f for f in forms if math.gcd(math.gcd(f.a, f.b), f.c) == 1]
    return len(forms)


def stark_k(form: QuadraticForm) -> float:
    return math.sqrt(form.disc) / (2 * form.a)


def residue(form: QuadraticForm) -> float:
    """Residue of the Epstein zeta function at s = 1."""
    return 2 * math.pi / math.sqrt(form.disc)
