"""Special functions used by the closed-form orbits and speed coefficients.

Real arguments only. Each routine is a scalar pure function.
"""
from __future__ import annotations

import math

__all__ = [
    "lambert_w0",
    "ln_gamma",
    "gamma",
    "beta",
    "inc_beta",
    "hyp2f1_via_beta",
    "hyp2f1_series",
]

_INV_E = math.exp(-1.0)

# Lanczos approximation, g = 7, n = 9 (Godfrey's coefficient set). Relative
# error of Gamma is below 2e-15 for x >= 0.5.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LN_2PI = 0.5 * math.log(2.0 * math.pi)


def lambert_w0(x: float) -> float:
    """Principal branch ``W0`` of the Lambert W function, ``W e^W = x``.

    Halley iteration seeded by the branch-point series for ``x < -1/4``,
    ``log1p(x)`` on ``[-1/4, e]`` and ``ln x - ln ln x`` above ``e``.

    Raises
    ------
    ValueError
        If ``x < -1/e``.
    """
    if math.isnan(x) or x < -_INV_E:
        raise ValueError(f"lambert_w0 is real only for x >= -1/e, got {x}")
    if x == 0.0:
        return 0.0
    if math.isinf(x):
        return math.inf
    if x < -0.25:
        p = math.sqrt(max(2.0 * (math.e * x + 1.0), 0.0))
        w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0 + p * 769.0 / 17280.0))))
        if p < 1e-3:
            # series truncation error is O(p**6) here, below rounding
            return w
    elif x <= math.e:
        w = math.log1p(x)
    else:
        lx = math.log(x)
        w = lx - math.log(lx)

    for _ in range(50):
        ew = math.exp(w)
        f = w * ew - x
        wp1 = w + 1.0
        dw = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= dw
        if abs(dw) <= 1e-15 * (1.0 + abs(w)):
            break
    return w


def ln_gamma(x: float) -> float:
    """``ln Gamma(x)`` for ``x > 0``."""
    if not x > 0:
        raise ValueError(f"ln_gamma requires x > 0, got {x}")
    if x < 0.5:
        return ln_gamma(x + 1.0) - math.log(x)
    z = x - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LN_2PI + (z + 0.5) * math.log(t) - t + math.log(acc)


def gamma(x: float) -> float:
    """``Gamma(x)`` for ``x > 0``."""
    return math.exp(ln_gamma(x))


def beta(a: float, b: float) -> float:
    """Complete Beta function ``B(a, b)``."""
    return math.exp(ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b))


def _beta_cf(x: float, a: float, b: float) -> float:
    """Continued fraction for ``I_x(a, b)`` (modified Lentz)."""
    tiny = 1e-300
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 10_000):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < 1e-16:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (x={x}, a={a}, b={b})")


def inc_beta(x: float, a: float, b: float) -> float:
    """Non-regularised incomplete Beta ``B_x(a, b) = int_0^x t^(a-1) (1-t)^(b-1) dt``.

    Uses the continued fraction directly below ``x = (a+1)/(a+b+2)`` and the
    complement ``B(a, b) - B_{1-x}(b, a)`` above it, which stays accurate for
    ``b < 1`` where the integrand is singular at ``t = 1``.
    """
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"inc_beta requires 0 <= x <= 1, got {x}")
    if not (a > 0 and b > 0):
        raise ValueError(f"inc_beta requires a, b > 0, got a={a}, b={b}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return beta(a, b)
    if x < (a + 1.0) / (a + b + 2.0):
        return math.exp(a * math.log(x) + b * math.log1p(-x)) / a * _beta_cf(x, a, b)
    y = 1.0 - x
    tail = math.exp(b * math.log(y) + a * math.log(x)) / b * _beta_cf(y, b, a)
    return beta(a, b) - tail


def hyp2f1_via_beta(a: float, b: float, c: float, x: float) -> float:
    """Gauss ``2F1(a, b; a+1; x)`` through ``2F1 = a x^(-a) B_x(a, 1-b)``.

    Only the family ``c = a + 1`` with ``a > 0`` and ``b < 1`` is supported.
    At ``x = 1`` Gauss's summation theorem is used.
    """
    if abs(c - (a + 1.0)) > 1e-12 * max(1.0, abs(c)):
        raise ValueError(f"only c = a + 1 is supported, got a={a}, c={c}")
    if not a > 0:
        raise ValueError(f"a must be positive, got {a}")
    if not (0.0 <= x <= 1.0):
        raise ValueError(f"x must lie in [0, 1], got {x}")
    bb = 1.0 - b
    if not bb > 0:
        raise ValueError(f"c - a - b = 1 - b must be positive, got b={b}")
    if x == 0.0:
        return 1.0
    if x == 1.0:
        return math.exp(ln_gamma(c) + ln_gamma(c - a - b) - ln_gamma(c - a) - ln_gamma(c - b))
    if x < (a + 1.0) / (a + bb + 2.0):
        # a x^-a * x^a (1-x)^bb / a * cf, with the x^a factors cancelled
        return math.exp(bb * math.log1p(-x)) * _beta_cf(x, a, bb)
    return a * math.exp(-a * math.log(x)) * inc_beta(x, a, bb)


def hyp2f1_series(a: float, b: float, c: float, x: float, terms: int = 2000) -> float:
    """Direct power series of ``2F1(a, b; c; x)`` for ``|x| < 1``; reference only."""
    if not abs(x) < 1:
        raise ValueError("series needs |x| < 1")
    total = 1.0
    term = 1.0
    for n in range(terms):
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * x
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    return total
