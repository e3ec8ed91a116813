"""Closed-form asymptotics of the speed deficit ``dc = c_crit - c(eps) > 0``.

Pulled fronts (``k <= 2``) lose ``pi**2 / (ln eps)**2``; pushed fronts lose
``alpha(k) eps**(1 - 4/k**2)``. The pushed coefficient comes from matching
the unstable manifold of ``Q-`` (perturbed through ``dV/dc``) with the
inner manifold across a reduced normal form near ``P1_hat``; the pieces of
that construction are exposed here so that they can be checked separately.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .model import CutoffVariant, c_crit
from .specfn import gamma, hyp2f1_via_beta


class Regime(str, enum.Enum):
    PULLED = "pulled"
    PUSHED = "pushed"


def regime(k: float) -> Regime:
    return Regime.PULLED if k <= 2 else Regime.PUSHED


@dataclass(frozen=True)
class SpeedCorrection:
    delta_c: float
    regime: Regime
    leading_exponent: float  # 0 marks the logarithmic law


def delta_c_pulled(eps: float) -> float:
    """``pi**2 / (ln eps)**2``."""
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return math.pi ** 2 / math.log(eps) ** 2


def _check_pushed(k: float):
    if not k > 2:
        raise ValueError(f"pushed-regime quantity requires k > 2, got {k}")


def exponent(k: float) -> float:
    """Power of ``eps`` in the pushed deficit, ``1 - 4/k**2``."""
    _check_pushed(k)
    return 1.0 - 4.0 / (k * k)


def alpha_limit(k: float) -> float:
    """Pushed coefficient ``2 k**-(1+8/k**2) (k**2-4)**(4/k**2) / (Gamma(1+4/k**2) Gamma(1-4/k**2))``."""
    _check_pushed(k)
    x = 4.0 / (k * k)
    return 2.0 * k ** (-1.0 - 2.0 * x) * (k * k - 4.0) ** x / (gamma(1.0 + x) * gamma(1.0 - x))


def delta_c_pushed(eps: float, k: float) -> float:
    _check_pushed(k)
    if not 0 < eps < 1:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    return alpha_limit(k) * eps ** exponent(k)


def delta_c(eps: float, k: float) -> float:
    """Leading-order deficit for either regime; 0 at ``eps = 0``."""
    if eps == 0:
        return 0.0
    return delta_c_pulled(eps) if k <= 2 else delta_c_pushed(eps, k)


def speed_correction(eps: float, k: float) -> SpeedCorrection:
    r = regime(k)
    return SpeedCorrection(delta_c(eps, k), r, 0.0 if r is Regime.PULLED else exponent(k))


def c_hat(eps: float, k: float) -> float:
    """Leading-order speed ``c_crit(k) - dc(eps)``."""
    if not 0 <= eps < 1:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    return c_crit(k) - delta_c(eps, k)


def _hyp(k: float, x: float) -> float:
    q = 4.0 / (k * k)
    return hyp2f1_via_beta(1.0 + q, q, 2.0 + q, x)


def dVdc_at_ccrit(U: float, k: float) -> float:
    """Sensitivity ``dV/dc`` of the unstable manifold of ``Q-`` at ``c = c_crit(k)``, ``k >= 2``.

    It is the solution of ``y' = -1 + (4/k**2) y / (U (1 - U))`` that vanishes
    as ``U -> 1``:

    * ``k = 2``: ``U (1 - U + ln U) / (U - 1)``
    * ``k > 2``: ``k**2/(k**2+4) U**(4/k**2) (1 - U) 2F1(1+4/k**2, 4/k**2; 2+4/k**2; 1-U)``
    """
    if not 0 < U < 1:
        raise ValueError("U must lie in (0, 1)")
    if k < 2:
        raise ValueError("closed form needs k >= 2")
    if k == 2:
        return U * (1.0 - U + math.log(U)) / (U - 1.0)
    q = 4.0 / (k * k)
    return k * k / (k * k + 4.0) * U ** q * (1.0 - U) * _hyp(k, 1.0 - U)


def nu(r0: float, k: float) -> float:
    """``nu(r0) = dVdc_at_ccrit(r0, k) / r0``, the ``dc``-coefficient of ``v1`` on ``{r1 = r0}``."""
    _check_pushed(k)
    if not 0 < r0 < 1:
        raise ValueError("r0 must lie in (0, 1)")
    q = 4.0 / (k * k)
    return k * k / (k * k + 4.0) * r0 ** (q - 1.0) * (1.0 - r0) * _hyp(k, 1.0 - r0)


def delta_r0(r0: float, k: float) -> float:
    """``r0**(1-4/k**2) [(k**2-4) nu(r0) + k**2]``.

    The ``+ k**2`` follows from ``W_in = -nu dc`` (see :func:`matching_points`).
    The ``r0``-dependence cancels as ``r0 -> 0``.
    """
    return r0 ** exponent(k) * ((k * k - 4.0) * nu(r0, k) + k * k)


def delta_r0_limit(k: float) -> float:
    """``(k**2 - 4) Gamma(1 + 4/k**2) Gamma(1 - 4/k**2)``."""
    _check_pushed(k)
    q = 4.0 / (k * k)
    return (k * k - 4.0) * gamma(1.0 + q) * gamma(1.0 - q)


def alpha_from_delta(delta: float, k: float) -> float:
    """Pushed coefficient built from a value of ``delta(r0)``."""
    _check_pushed(k)
    q = 4.0 / (k * k)
    num = (2.0 * k) ** (0.5 * (1.0 - q)) * (2.0 * (k * k - 4.0) ** 2) ** (0.5 * (1.0 + q))
    return num / (delta * (k ** 3) ** (0.5 * (1.0 + q)))


def alpha_r0(r0: float, k: float) -> float:
    return alpha_from_delta(delta_r0(r0, k), k)


@dataclass(frozen=True)
class MatchingExpansion:
    W_in: float
    W_out: float
    r0: float
    nu: float


def matching_points(
    delta_c: float, eps: float, r0: float, k: float, variant: CutoffVariant = CutoffVariant.CUT_BOTH
) -> MatchingExpansion:
    """Leading-order normal-form coordinates of the entry and exit points of the K1 passage.

    ``W_in = -nu(r0) dc``: lowering ``c`` by ``dc`` moves the unstable manifold
    by ``-(dV/dc) dc`` because ``dV/dc > 0``.
    ``W_out = -2/k + dc - (k/2) eps`` for ``CutBoth``; with the advection
    left uncut only ``-2/k`` survives at this order.
    """
    _check_pushed(k)
    n = nu(r0, k)
    w_in = -n * delta_c
    variant = CutoffVariant.parse(variant)
    if variant is CutoffVariant.CUT_REACTION_ONLY:
        w_out = -2.0 / k
    else:
        w_out = -2.0 / k + delta_c - 0.5 * k * eps
    return MatchingExpansion(w_in, w_out, r0, n)


def kappa_exponent(k: float) -> float:
    """Error exponent ``(k**4 + 16 k**2 - 48) / (2 k**2 (k**2 + 4))`` of the reduced normal form."""
    _check_pushed(k)
    k2 = k * k
    return (k2 * k2 + 16.0 * k2 - 48.0) / (2.0 * k2 * (k2 + 4.0))


def normal_form_transit(dc: float, w_in: float, w_out: float, k: float) -> float:
    """Time the reduced normal form ``W' = -dc + ((k/2-2/k) W - W**2)/(k/2 - W)`` needs from ``w_in`` to ``w_out``.

    Closed-form antiderivative of ``(k**2 - 2kW) / Q(W)`` with
    ``Q(W) = -2k W**2 + (k**2 + 2k dc - 4) W - k**2 dc``.
    """
    b = k * k + 2.0 * k * dc - 4.0
    disc = b * b - 8.0 * k ** 3 * dc
    if disc <= 0:
        raise ValueError(f"dc={dc} too large: normal-form quadratic has no real roots")
    root = math.sqrt(disc)
    b_minus = 8.0 * k ** 3 * dc / (b + root)  # b - root without cancellation
    amp = (0.5 * k * k + 2.0 - k * dc) / root

    def antideriv(w):
        q = -2.0 * k * w * w + b * w - k * k * dc
        ratio = (-4.0 * k * w + b_minus) / (-4.0 * k * w + b + root)
        return 0.5 * math.log(abs(q)) + amp * math.log(abs(ratio))

    return antideriv(w_out) - antideriv(w_in)


class NormalFormBracketError(ArithmeticError):
    def __init__(self, message, bracket, values):
        super().__init__(message)
        self.bracket = bracket
        self.values = values


def delta_c_normal_form_root(
    eps: float, r0: float, k: float, variant: CutoffVariant = CutoffVariant.CUT_BOTH
) -> float:
    """Solve ``transit(dc) = ln(r0/eps)`` for the deficit by bisection on ``(1e-16, 10 dc_leading)``.

    Raises
    ------
    NormalFormBracketError
        If the relation has no sign change on the bracket; carries both ends
        and values.
    """
    _check_pushed(k)
    if not 0 < eps < r0 < 1:
        raise ValueError("need 0 < eps < r0 < 1")
    target = math.log(r0 / eps)

    def g(dc):
        m = matching_points(dc, eps, r0, k, variant)
        return target - normal_form_transit(dc, m.W_in, m.W_out, k)

    # Q has real roots only for dc < (k - 2)**2 / (2k)
    lo, hi = 1e-16, min(10.0 * delta_c_pushed(eps, k), (1.0 - 1e-9) * (k - 2.0) ** 2 / (2.0 * k))
    g_lo, g_hi = g(lo), g(hi)
    if g_lo * g_hi > 0:
        raise NormalFormBracketError(
            f"no sign change of the transit relation on [{lo:.1e}, {hi:.3e}]: {g_lo:.3e}, {g_hi:.3e}",
            (lo, hi),
            (g_lo, g_hi),
        )
    for _ in range(300):
        mid = 0.5 * (lo + hi)
        g_mid = g(mid)
        if (g_mid > 0) == (g_lo > 0):
            lo, g_lo = mid, g_mid
        else:
            hi = mid
        if hi - lo <= 1e-15 * hi:
            break
    return 0.5 * (lo + hi)
