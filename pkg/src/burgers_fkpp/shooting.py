"""Shooting for the front speed: the unstable manifold of ``Q- = (1, 0)`` must
meet the exactly known inner stable manifold on the cut-off line ``U = eps``.

The outer orbit is integrated in the log-blown-up variables ``s = ln U``,
``v1 = V / U``::

    s'  = v1
    v1' = -c v1 + k U v1 - (1 - U) - v1**2,     U = exp(s)

which are the chart-K1 coordinates with ``r1`` replaced by its logarithm.
Relative accuracy in ``U`` and ``V`` is then uniform down to ``U = eps``
however small ``eps`` is.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

from scipy.optimize import brentq

from . import asymptotics
from .model import CutoffVariant, ModelParams, PhaseState, Q_MINUS, c_crit, equilibria_eigen, inner_manifold_V
from .ode import IntegrationError, IntegratorConfig, integrate_to_event

__all__ = [
    "IntegratorConfig",
    "IntegrationError",
    "BracketError",
    "OrbitTrace",
    "SpeedResult",
    "unstable_seed",
    "integrate_to_cutoff",
    "integrate_to_level",
    "matching_residual",
    "solve_speed",
    "dVdc_fd",
    "front_profile",
    "unstable_manifold_trace",
]


class BracketError(RuntimeError):
    """The matching residual has the same sign at both ends of the speed bracket."""

    def __init__(self, message, bracket, residuals):
        super().__init__(message)
        self.bracket = bracket
        self.residuals = residuals


@dataclass
class OrbitTrace:
    """Samples ``(xi, U, V)`` along a trajectory, ordered by ``xi``."""

    rows: list[tuple[float, float, float]] = field(default_factory=list)

    def __len__(self):
        return len(self.rows)

    def is_monotone(self) -> bool:
        return all(b[1] < a[1] for a, b in zip(self.rows, self.rows[1:]))

    def to_csv(self, fh=None) -> str | None:
        out = fh if fh is not None else io.StringIO()
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["xi", "U", "V"])
        for row in self.rows:
            w.writerow([f"{x:.15e}" for x in row])
        if fh is None:
            return out.getvalue()
        return None


@dataclass(frozen=True)
class SpeedResult:
    c: float
    residual: float
    bracket: tuple[float, float]
    iterations: int
    variant: CutoffVariant


@dataclass(frozen=True)
class CutoffCrossing:
    xi: float
    state: PhaseState
    trace: OrbitTrace | None


def unstable_seed(k: float, c: float, delta: float) -> PhaseState:
    """Point at distance ``delta`` from ``Q-`` along its unstable eigenvector, on the side ``U < 1, V < 0``."""
    if delta < 0:
        raise ValueError("delta must be non-negative")
    pairs = equilibria_eigen(Q_MINUS, k, c)
    lam_u = max(p.value for p in pairs)
    if not (len(pairs) == 2 and lam_u > 0 > min(p.value for p in pairs)):
        raise ValueError(f"Q- is not a saddle for k={k}, c={c}")
    wu, wv = 1.0 / lam_u, 1.0
    norm = math.hypot(wu, wv)
    return PhaseState(1.0 - delta * wu / norm, -delta * wv / norm)


def _log_field(k: float, c: float):
    exp = math.exp

    def f(s, v):
        U = exp(s)
        return v, -c * v + k * U * v - (1.0 - U) - v * v

    return f


def _seed_log(k: float, c: float, cfg: IntegratorConfig) -> tuple[float, float]:
    seed = unstable_seed(k, c, cfg.seed_offset)
    return math.log(seed.U), seed.V / seed.U


def _outer_slope(U: float, V: float, k: float, c: float) -> float:
    return (-c * V + k * U * V - U * (1.0 - U)) / V


def integrate_to_level(k: float, c: float, U_target: float, cfg: IntegratorConfig | None = None, record: bool = False) -> CutoffCrossing:
    """Follow the unstable manifold of ``Q-`` in the uncut field until ``U = U_target``."""
    cfg = cfg or IntegratorConfig()
    if not 0 < U_target < 1:
        raise ValueError("U_target must lie in (0, 1)")
    s0 = _seed_log(k, c, cfg)
    if math.exp(s0[0]) <= U_target:
        raise ValueError("seed offset too large for this target level")
    ls = math.log(U_target)
    # |s - ls| <= event_tol bounds the relative landing error, which v = V/U needs at small U
    xi, (s, v), raw = integrate_to_event(_log_field(k, c), s0, lambda s, v: s - ls, cfg, record=record)
    U = math.exp(s)
    trace = None
    if record:
        trace = OrbitTrace([(x, math.exp(a), math.exp(a) * b) for x, a, b in raw])
    return CutoffCrossing(xi, PhaseState(U, U * v), trace)


def integrate_to_cutoff(p: ModelParams, c: float, cfg: IntegratorConfig | None = None, record: bool = False) -> CutoffCrossing:
    """Integrate the outer field from the seed until ``U = eps``.

    For ``U > eps`` the ``CutBoth`` and ``CutReactionOnly`` fields coincide
    with the uncut one, so the variant does not enter here.
    """
    if not p.eps > 0:
        raise ValueError("integrate_to_cutoff needs eps > 0")
    return integrate_to_level(p.k, c, p.eps, cfg, record)


def matching_residual(c: float, p: ModelParams, cfg: IntegratorConfig | None = None) -> float:
    """``V_out(c, eps) - V_in(c, eps)``; zero exactly at the connecting speed.

    Both sides are evaluated at the landed ``U`` so that the event tolerance
    does not leak into the residual.
    """
    if p.variant not in (CutoffVariant.CUT_BOTH, CutoffVariant.CUT_REACTION_ONLY):
        raise ValueError(f"shooting is not defined for variant {p.variant.value}")
    hit = integrate_to_cutoff(p, c, cfg)
    return hit.state.V - inner_manifold_V(hit.state.U, p, c)


def solve_speed(p: ModelParams, cfg: IntegratorConfig | None = None, bracket: tuple[float, float] | None = None) -> SpeedResult:
    """Unique speed ``c(eps)`` (or ``gamma(eps)`` for ``CutReactionOnly``).

    The bracket defaults to ``[c_hat - 10 dc, c_crit]`` with ``dc`` the leading
    order deficit, widened downward if needed. Root finding is Brent's method.
    """
    cfg = cfg or IntegratorConfig()
    if p.variant is CutoffVariant.BURGERS_CUT_ADVECTION:
        raise ValueError("the Burgers variant has a closed-form speed; use model.burgers_speed")
    cc = c_crit(p.k)
    if p.eps == 0 or p.variant is CutoffVariant.NO_CUTOFF:
        return SpeedResult(cc, 0.0, (cc, cc), 0, p.variant)

    if bracket is None:
        dc = asymptotics.delta_c(p.eps, p.k)
        hi = cc
        lo = max(cc - 11.0 * dc, 0.5 * cc)
    else:
        lo, hi = bracket
    f_hi = matching_residual(hi, p, cfg)
    f_lo = matching_residual(lo, p, cfg)
    floor = 0.05 * cc
    while bracket is None and f_lo > 0 and lo > floor:
        lo = max(floor, cc - 2.0 * (cc - lo))
        f_lo = matching_residual(lo, p, cfg)
    if f_lo * f_hi > 0:
        raise BracketError(
            f"matching residual has one sign on [{lo}, {hi}]: {f_lo:.3e}, {f_hi:.3e}",
            (lo, hi),
            (f_lo, f_hi),
        )
    c, info = brentq(matching_residual, lo, hi, args=(p, cfg), xtol=1e-14, rtol=1e-15, maxiter=200, full_output=True)
    res = matching_residual(c, p, cfg)
    return SpeedResult(float(c), float(res), (lo, hi), int(info.iterations), p.variant)


def dVdc_fd(U_target: float, k: float, h: float = 1e-5, cfg: IntegratorConfig | None = None) -> float:
    """Central difference of ``V(c, U_target)`` on the unstable manifold at ``c = c_crit(k)``."""
    if not 0 < h <= 1e-4:
        raise ValueError("h must lie in (0, 1e-4]")
    cc = c_crit(k)

    def V_at(c):
        hit = integrate_to_level(k, c, U_target, cfg)
        U, V = hit.state.U, hit.state.V
        return V + _outer_slope(U, V, k, c) * (U_target - U)

    return (V_at(cc + h) - V_at(cc - h)) / (2.0 * h)


def unstable_manifold_trace(k: float, c: float, U_min: float, cfg: IntegratorConfig | None = None) -> OrbitTrace:
    """Recorded unstable manifold of ``Q-`` in the uncut field down to ``U = U_min``."""
    return integrate_to_level(k, c, U_min, cfg, record=True).trace


def _inner_tail(p: ModelParams, c: float, xi0: float, U0: float, xi_span: float, n: int):
    rows = []
    k = p.k
    for i in range(1, n + 1):
        t = xi_span * i / n
        if p.variant is CutoffVariant.CUT_REACTION_ONLY:
            # U' = -c U + (k/2) U**2 on the inner manifold
            q = 0.5 * k / c
            U = 1.0 / (q + (1.0 / U0 - q) * math.exp(c * t))
        else:
            U = U0 * math.exp(-c * t)
        rows.append((xi0 + t, U, inner_manifold_V(U, p, c)))
    return rows


def front_profile(
    p: ModelParams,
    c: float | None = None,
    xi_span: float = 10.0,
    cfg: IntegratorConfig | None = None,
    tail_points: int = 200,
) -> OrbitTrace:
    """Front ``U(xi)`` from ``Q-`` down through the cut-off into the inner tail.

    The outer piece is the recorded shooting orbit; beyond the crossing the
    closed-form inner solution is appended over ``xi_span``.
    """
    if p.variant not in (CutoffVariant.CUT_BOTH, CutoffVariant.CUT_REACTION_ONLY):
        raise ValueError(f"profiles are available for cut-both and cut-reaction only, not {p.variant.value}")
    if c is None:
        c = solve_speed(p, cfg).c
    hit = integrate_to_cutoff(p, c, cfg, record=True)
    rows = list(hit.trace.rows)
    xi0, U0 = hit.xi, hit.state.U
    rows.extend(_inner_tail(p, c, xi0, U0, xi_span, tail_points))
    return OrbitTrace(rows)
