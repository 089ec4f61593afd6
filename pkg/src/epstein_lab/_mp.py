"""Extended-precision route: the unrotated incomplete-gamma expansion in mpmath.

Working precision grows with |Im s| so the e^{pi |t| / 2} cancellation between
the terms is absorbed by the extra digits.
"""

from __future__ import annotations

import math

import mpmath as mp

from .qform import QuadraticForm, cached_rep_counts


def scaled_lambda(form: QuadraticForm, s: complex, digits: int = 20) -> tuple[complex, float]:
    """(e^{pi|t|/2} Lambda(s), error estimate) using mpmath.gammainc."""
    t = abs(complex(s).imag)
    dps = digits + 10 + int(math.pi * t / (2 * math.log(10))) + 1
    with mp.workdps(dps):
        s = mp.mpc(s)
        one_s = 1 - s
        alpha = 2 * mp.pi / mp.sqrt(form.disc)
        total = 1 / (s - 1) - 1 / s
        target = mp.mpf(10) ** (-digits) * mp.exp(-mp.pi * t / 2)
        sig = max(float(s.real), float(one_s.real), 1.0)
        # |E(s, x)| <= 2 e^{-x} / x once x >= 2 max(sigma, 1 - sigma)
        nmax = int((math.pi * t / 2 + digits * math.log(10) + 10) / float(alpha)) + 1
        nmax = max(nmax, int(2 * sig / float(alpha)) + 2)
        table = cached_rep_counts(form, nmax)
        ns, rs = table.support()
        for n, r in zip(ns.tolist(), rs.tolist()):
            x = alpha * n
            term = x ** (-s) * mp.gammainc(s, x) + x ** (-one_s) * mp.gammainc(one_s, x)
            total += r * term
            if x > 2 * sig and r * 2 * mp.exp(-x) / x * 4 < target:
                break
        scaled = total * mp.exp(mp.pi * t / 2)
        err = float(10 * mp.mpf(10) ** (-digits) * (1 + abs(scaled)))
        return complex(scaled), err
