"""Vectorised double-double arithmetic (value = hi + lo, |lo| <= ulp(hi)/2).

Only the handful of operations needed to sum cancellation-prone power series.
"""

from __future__ import annotations

import numpy as np

_SPLIT = 134217729.0  # 2**27 + 1

SQRT_PI = (1.772453850905516, -7.666586499825799e-17)


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def _split(a):
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def add(x, y):
    s, e = two_sum(x[0], y[0])
    e = e + x[1] + y[1]
    return two_sum(s, e)


def neg(x):
    return -x[0], -x[1]


def mul(x, y):
    p, e = two_prod(x[0], y[0])
    e = e + (x[0] * y[1] + x[1] * y[0])
    return two_sum(p, e)


def div_double(x, d):
    """Divide a double-double by a plain double."""
    q1 = x[0] / d
    p, e = two_prod(q1, d)
    r = ((x[0] - p) - e + x[1]) / d
    return two_sum(q1, r)


def div(x, y):
    q1 = x[0] / y[0]
    r = add(x, neg(mul((q1, np.zeros_like(q1)), y)))
    q2 = r[0] / y[0]
    return two_sum(q1, q2)


def sqrt_double(a):
    """Square root of a plain (nonnegative) double as a double-double."""
    r = np.sqrt(a)
    p, e = two_prod(r, r)
    with np.errstate(invalid="ignore", divide="ignore"):
        corr = np.where(r > 0.0, ((a - p) - e) / (2.0 * r), 0.0)
    return two_sum(r, corr)


def from_double(a):
    a = np.asarray(a, dtype=float)
    return a, np.zeros_like(a)


def to_double(x):
    return x[0] + x[1]
