"""Upper-tail probabilities of the central F distribution."""

import math

from .exceptions import InvalidDfError, NoConvergenceError

MAX_ITER = 300
EPS = 1e-12
_TINY = 1e-300


def _beta_cf(a, b, x):
    # modified Lentz evaluation of the incomplete-beta continued fraction
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _TINY:
        d = _TINY
    d = 1.0 / d
    h = d
    for m in range(1, MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _TINY:
            d = _TINY
        c = 1.0 + aa / c
        if abs(c) < _TINY:
            c = _TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < EPS:
            return h
    raise NoConvergenceError(f"incomplete beta continued fraction: no convergence for a={a}, b={b}, x={x}")


def betainc(a, b, x, y=None):
    """Regularized incomplete beta function ``I_x(a, b)``.

    ``y`` may carry ``1 - x`` computed without cancellation by the caller.
    """
    if y is None:
        y = 1.0 - x
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return 1.0
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log(y)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _beta_cf(a, b, x) / a
    return 1.0 - front * _beta_cf(b, a, y) / b


def f_upper_tail(f, d1, d2):
    """P(F(d1, d2) > f) for the central F distribution."""
    if not (d1 >= 1 and d2 >= 1):
        raise InvalidDfError(f"degrees of freedom must be >= 1, got ({d1}, {d2})")
    if math.isnan(f) or f < 0:
        raise InvalidDfError(f"F statistic must be nonnegative, got {f}")
    if f == 0:
        return 1.0
    if math.isinf(f):
        return 0.0
    denom = d2 + d1 * f
    p = betainc(d2 / 2.0, d1 / 2.0, d2 / denom, d1 * f / denom)
    return min(1.0, max(0.0, p))
