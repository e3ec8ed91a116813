"""Adaptive Dormand-Prince 5(4) integration of planar autonomous systems.

The shooting code calls this integrator thousands of times per sweep, and
every state is two-dimensional, so states are plain float pairs instead of
numpy arrays.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Callable

Field = Callable[[float, float], tuple[float, float]]

# Dormand & Prince (1980) tableau, FSAL form; autonomous, so the nodes c_i are unused.
_A21 = 1 / 5
_A31, _A32 = 3 / 40, 9 / 40
_A41, _A42, _A43 = 44 / 45, -56 / 15, 32 / 9
_A51, _A52, _A53, _A54 = 19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729
_A61, _A62, _A63, _A64, _A65 = 9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656
_B1, _B3, _B4, _B5, _B6 = 35 / 384, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84
# b - b_hat (difference between 5th and embedded 4th order weights)
_E1 = 71 / 57600
_E3 = -71 / 16695
_E4 = 71 / 1920
_E5 = -17253 / 339200
_E6 = 22 / 525
_E7 = -1 / 40

_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0


class IntegrationError(RuntimeError):
    """Raised when a trajectory cannot be carried to its terminal event."""

    def __init__(self, message: str, xi: float = math.nan, state: tuple[float, float] = (math.nan, math.nan)):
        super().__init__(message)
        self.xi = xi
        self.state = state


@dataclass(frozen=True)
class IntegratorConfig:
    """Tolerances and limits shared by every shooting integration.

    ``event_tol`` bounds ``|ln U - ln target|`` at a terminal crossing and
    ``seed_offset`` is the distance from the saddle along its unstable
    eigenvector.
    """

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_steps: int = 200_000
    event_tol: float = 1e-12
    seed_offset: float = 1e-8

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol", "event_tol", "seed_offset"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")

    def tightened(self, factor: float = 0.5) -> "IntegratorConfig":
        """Copy with the three tolerances multiplied by ``factor``."""
        return replace(
            self,
            rel_tol=self.rel_tol * factor,
            abs_tol=self.abs_tol * factor,
            event_tol=self.event_tol * factor,
        )


def _step(f: Field, y0: float, y1: float, k1: tuple[float, float], h: float):
    """One Dormand-Prince step; returns the new state, its slope and the error estimate."""
    k10, k11 = k1
    k20, k21 = f(y0 + h * _A21 * k10, y1 + h * _A21 * k11)
    k30, k31 = f(y0 + h * (_A31 * k10 + _A32 * k20), y1 + h * (_A31 * k11 + _A32 * k21))
    k40, k41 = f(
        y0 + h * (_A41 * k10 + _A42 * k20 + _A43 * k30),
        y1 + h * (_A41 * k11 + _A42 * k21 + _A43 * k31),
    )
    k50, k51 = f(
        y0 + h * (_A51 * k10 + _A52 * k20 + _A53 * k30 + _A54 * k40),
        y1 + h * (_A51 * k11 + _A52 * k21 + _A53 * k31 + _A54 * k41),
    )
    k60, k61 = f(
        y0 + h * (_A61 * k10 + _A62 * k20 + _A63 * k30 + _A64 * k40 + _A65 * k50),
        y1 + h * (_A61 * k11 + _A62 * k21 + _A63 * k31 + _A64 * k41 + _A65 * k51),
    )
    n0 = y0 + h * (_B1 * k10 + _B3 * k30 + _B4 * k40 + _B5 * k50 + _B6 * k60)
    n1 = y1 + h * (_B1 * k11 + _B3 * k31 + _B4 * k41 + _B5 * k51 + _B6 * k61)
    k7 = f(n0, n1)
    e0 = h * (_E1 * k10 + _E3 * k30 + _E4 * k40 + _E5 * k50 + _E6 * k60 + _E7 * k7[0])
    e1 = h * (_E1 * k11 + _E3 * k31 + _E4 * k41 + _E5 * k51 + _E6 * k61 + _E7 * k7[1])
    return n0, n1, k7, e0, e1


def integrate_to_event(
    f: Field,
    y0: tuple[float, float],
    event: Callable[[float, float], float],
    cfg: IntegratorConfig,
    *,
    event_scale: float = 1.0,
    xi_max: float = 1e4,
    record: bool = False,
):
    """Integrate ``y' = f(y)`` from ``y0`` until ``event`` changes sign from + to -.

    The crossing step is re-taken with bisected step lengths until
    ``|event| * event_scale <= cfg.event_tol`` (``event_scale`` converts the
    event function to the units the tolerance is stated in).

    Returns ``(xi, state, trace)`` where ``trace`` is a list of
    ``(xi, y0, y1)`` tuples when ``record`` is set, else ``None``.

    Raises
    ------
    IntegrationError
        If ``max_steps`` or ``xi_max`` is exceeded, or the state stops being finite.
    """
    a, b = y0
    g = event(a, b)
    if g <= 0.0:
        raise IntegrationError("initial state already past the event", 0.0, (a, b))
    xi = 0.0
    k1 = f(a, b)
    trace = [(xi, a, b)] if record else None
    rtol, atol = cfg.rel_tol, cfg.abs_tol
    scale = max(abs(k1[0]), abs(k1[1]), 1e-300)
    h = min(0.01 * max(abs(a), abs(b), 1e-3) / scale, 0.1)
    h = max(h, 1e-12)

    for _ in range(cfg.max_steps):
        n0, n1, k7, e0, e1 = _step(f, a, b, k1, h)
        sc0 = atol + rtol * max(abs(a), abs(n0))
        sc1 = atol + rtol * max(abs(b), abs(n1))
        err = math.sqrt(0.5 * ((e0 / sc0) ** 2 + (e1 / sc1) ** 2))
        if not math.isfinite(err):
            h *= 0.25
            if h < 1e-14:
                raise IntegrationError("non-finite state", xi, (a, b))
            continue
        if err > 1.0:
            h *= max(_MIN_FACTOR, _SAFETY * err ** -0.2)
            if h < 1e-14:
                raise IntegrationError("step size underflow", xi, (a, b))
            continue

        g_new = event(n0, n1)
        if g_new <= 0.0:
            return _refine(f, xi, a, b, k1, h, event, cfg.event_tol, event_scale, trace)

        xi += h
        a, b, k1 = n0, n1, k7
        if record:
            trace.append((xi, a, b))
        if xi > xi_max:
            raise IntegrationError(f"event not reached before xi={xi_max:g}", xi, (a, b))
        factor = _MAX_FACTOR if err == 0.0 else min(_MAX_FACTOR, _SAFETY * err ** -0.2)
        h *= factor

    raise IntegrationError(f"max_steps={cfg.max_steps} exceeded", xi, (a, b))


def _refine(f, xi, a, b, k1, h, event, tol, event_scale, trace):
    lo, hi = 0.0, h
    best = None
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        n0, n1, _, _, _ = _step(f, a, b, k1, mid)
        g = event(n0, n1)
        best = (mid, n0, n1)
        if abs(g) * event_scale <= tol:
            break
        if g > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * max(h, 1.0):
            n0, n1, _, _, _ = _step(f, a, b, k1, hi)
            best = (hi, n0, n1)
            break
    mid, n0, n1 = best
    if trace is not None:
        trace.append((xi + mid, n0, n1))
    return xi + mid, (n0, n1), trace
