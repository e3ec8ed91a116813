"""Blow-up charts of the origin and the closed-form pieces of the singular orbit.

The blow-up ``U = r u, V = r v, eps = r e`` of ``(0, 0, 0)`` is used in two
affine charts:

* K1 (``u = 1``): ``U = r1``, ``V = r1 v1``, ``eps = r1 e1`` (outer region);
* K2 (``e = 1``): ``U = r2 u2``, ``V = r2 v2``, ``eps = r2`` (inner region).

The section ``{u2 = 1}`` is the cut-off line ``U = eps`` seen from K2, and
``kappa21`` maps it to ``{e1 = 1}`` in K1.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .model import c_crit, explicit_pushed_orbit
from .specfn import lambert_w0


class Chart(str, enum.Enum):
    K1 = "K1"
    K2 = "K2"


@dataclass(frozen=True)
class ChartPoint:
    """A point in one blow-up chart.

    ``coords`` is ``(r1, v1, e1)`` in K1 and ``(u2, v2, r2)`` in K2.
    """

    chart: Chart
    coords: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "chart", Chart(self.chart))
        a, b, c = self.coords
        if self.chart is Chart.K1 and (a < 0 or c < 0):
            raise ValueError("K1 requires r1 >= 0 and e1 >= 0")
        if self.chart is Chart.K2 and c < 0:
            raise ValueError("K2 requires r2 >= 0")


class SectionId(str, enum.Enum):
    SIGMA2_IN = "sigma2_in"
    SIGMA1_OUT = "sigma1_out"
    SIGMA1_IN = "sigma1_in"


@dataclass(frozen=True)
class Section:
    """Transversal sections used to glue the singular orbit.

    ``Sigma2In = {u2 = 1}``, ``Sigma1Out = {e1 = 1}``, ``Sigma1In = {r1 = r0}``.
    ``v0`` and ``r0`` bound the section boxes.
    """

    id: SectionId
    r0: float = 0.1
    v0: float = 10.0

    def contains(self, p: ChartPoint, atol: float = 1e-12) -> bool:
        a, b, c = p.coords
        if self.id is SectionId.SIGMA2_IN:
            return p.chart is Chart.K2 and abs(a - 1.0) <= atol and -self.v0 <= b <= 0 and 0 <= c <= self.r0
        if self.id is SectionId.SIGMA1_OUT:
            return p.chart is Chart.K1 and abs(c - 1.0) <= atol and 0 <= a <= self.r0 and -self.v0 <= b <= 0
        return p.chart is Chart.K1 and abs(a - self.r0) <= atol and -self.v0 <= b <= 0 and 0 <= c <= 1


def blow_down(p: ChartPoint) -> tuple[float, float, float]:
    """Return the original coordinates ``(U, V, eps)``."""
    a, b, c = p.coords
    if p.chart is Chart.K1:
        return a, a * b, a * c
    return c * a, c * b, c


def kappa21(p: ChartPoint) -> ChartPoint:
    """Change of coordinates K2 -> K1: ``r1 = r2 u2, v1 = v2/u2, e1 = 1/u2``."""
    if p.chart is not Chart.K2:
        raise ValueError("kappa21 expects a K2 point")
    u2, v2, r2 = p.coords
    if not u2 > 0:
        raise ValueError("kappa21 is defined only for u2 > 0")
    return ChartPoint(Chart.K1, (r2 * u2, v2 / u2, 1.0 / u2))


def kappa12(p: ChartPoint) -> ChartPoint:
    """Inverse of :func:`kappa21`, defined for ``e1 > 0``."""
    if p.chart is not Chart.K1:
        raise ValueError("kappa12 expects a K1 point")
    r1, v1, e1 = p.coords
    if not e1 > 0:
        raise ValueError("kappa12 is defined only for e1 > 0")
    return ChartPoint(Chart.K2, (1.0 / e1, v1 / e1, r1 * e1))


def k1_field(r1: float, v1: float, e1: float, k: float, c: float) -> tuple[float, float, float]:
    """Outer system in chart K1 (``U > eps``)."""
    return (
        r1 * v1,
        -c * v1 + k * r1 * v1 - (1.0 - r1) - v1 * v1,
        -e1 * v1,
    )


def k1_jacobian(r1: float, v1: float, e1: float, k: float, c: float) -> np.ndarray:
    return np.array(
        [
            [v1, r1, 0.0],
            [k * v1 + 1.0, -c + k * r1 - 2.0 * v1, 0.0],
            [0.0, -e1, -v1],
        ]
    )


def gamma2(u2: float, k: float) -> float:
    """Stable manifold of ``Q2+`` in the limit ``r2 = 0``: ``v2 = -c_crit(k) u2``."""
    return -c_crit(k) * u2


def gamma1_plus_pulled(eps1: float) -> float:
    """Singular orbit in ``{r1 = 0}`` for ``k <= 2``, through ``(e1, v1) = (1, -2)``.

    Solves ``dv1/de1 = (v1 + 1)**2 / (e1 v1)``; tends to ``P1`` (``v1 = -1``)
    as ``e1 -> 0``.
    """
    if not eps1 > 0:
        raise ValueError("eps1 must be positive")
    w = lambert_w0(math.e / eps1)
    return -(1.0 + w) / w


def _pushed_log_form(v1: float, k: float) -> float:
    return k * k * math.log(abs(k + 2.0 * v1)) - 4.0 * math.log(abs(k * v1 + 2.0))


def gamma1_plus_pushed_residual(v1: float, eps1: float, k: float) -> float:
    """Residual of the implicit relation defining the pushed ``Gamma1+``.

    Separating ``dv1/de1 = (v1 + k/2)(v1 + 2/k) / (e1 v1)`` gives
    ``k**2 ln|k + 2 v1| - 4 ln|k v1 + 2| = (k**2 - 4) ln e1 + C`` with ``C``
    fixed by ``v1(1) = -c_crit(k)``.
    """
    const = _pushed_log_form(-c_crit(k), k)
    return _pushed_log_form(v1, k) - (k * k - 4.0) * math.log(eps1) - const


def gamma1_plus_pushed(eps1: float, k: float) -> float:
    """Singular orbit in ``{r1 = 0}`` for ``k > 2``, between ``v1(1) = -k/2 - 2/k`` and ``v1(0+) = -k/2``.

    Written as ``v1 = -k/2 - exp(s)`` the relation is strictly increasing in
    ``s`` and well conditioned near ``-k/2``, so ``s`` is found by bisection.
    """
    if not k > 2:
        raise ValueError("the pushed orbit requires k > 2")
    if not 0 < eps1 <= 1:
        raise ValueError("eps1 must lie in (0, 1]")
    if eps1 == 1.0:
        return -c_crit(k)
    a = 0.5 * (k * k - 4.0)
    const = _pushed_log_form(-c_crit(k), k)
    target = (k * k - 4.0) * math.log(eps1) + const

    def g(s):
        # log form at v1 = -k/2 - t, t = exp(s): |k + 2 v1| = 2t, |k v1 + 2| = a + k t
        return k * k * (math.log(2.0) + s) - 4.0 * math.log(a + k * math.exp(s)) - target

    hi = math.log(2.0 / k)
    lo = hi - 1.0
    while g(lo) > 0:
        lo = hi - 2.0 * (hi - lo)
        if lo < -700.0:
            raise ArithmeticError(f"no root of the pushed Gamma1+ relation for eps1={eps1}, k={k}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= 1e-15 * max(1.0, abs(hi)):
            break
    return -0.5 * k - math.exp(0.5 * (lo + hi))


def gamma1_minus_pushed(r1: float, k: float) -> float:
    """The explicit front ``V = -(k/2) U (1 - U)`` in K1: ``v1 = -(k/2)(1 - r1)``."""
    if not 0 < r1 <= 1:
        raise ValueError("r1 must lie in (0, 1]")
    return 0.5 * k * (r1 - 1.0)


@dataclass(frozen=True)
class K1Equilibrium:
    name: str
    point: tuple[float, float, float]
    eigenvalues: tuple[float, ...]
    eigenvectors: tuple[tuple[float, float, float], ...]


def k1_equilibria_eigen(k: float) -> list[K1Equilibrium]:
    """Equilibria of the K1 system on ``{r1 = 0, e1 = 0}`` at ``c = c_crit(k)``.

    ``k <= 2`` gives ``P1 = (0, -1, 0)``; ``k > 2`` gives ``P1_hat = (0, -k/2, 0)``
    and the weak point ``P1_check = (0, -2/k, 0)`` (whose eigen-data is not
    reported).
    """
    if k <= 2:
        return [
            K1Equilibrium(
                "P1",
                (0.0, -1.0, 0.0),
                (-1.0, 0.0, 1.0),
                ((1.0, k - 1.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
            )
        ]
    return [
        K1Equilibrium(
            "P1_hat",
            (0.0, -0.5 * k, 0.0),
            (-0.5 * k, 0.5 * k - 2.0 / k, 0.5 * k),
            ((2.0 / k, 1.0, 0.0), (0.0, 1.0, 0.0), (0.0, 0.0, 1.0)),
        ),
        K1Equilibrium("P1_check", (0.0, -2.0 / k, 0.0), (), ()),
    ]


@dataclass
class OrbitPiece:
    """One sampled piece of the singular orbit, in its natural chart coordinates."""

    name: str
    chart: Chart
    param_name: str
    coord_name: str
    samples: list[tuple[float, float]]

    def rows(self) -> Iterable[tuple[float, float]]:
        return iter(self.samples)


def _grid(lo: float, hi: float, n: int, log: bool = False) -> np.ndarray:
    if log:
        return np.logspace(math.log10(lo), math.log10(hi), n)
    return np.linspace(lo, hi, n)


def sample_gamma2(k: float, n: int = 101) -> OrbitPiece:
    u = _grid(0.0, 1.0, n)
    return OrbitPiece("gamma2", Chart.K2, "u2", "v2", [(float(x), gamma2(float(x), k)) for x in u])


def sample_gamma1_plus(k: float, n: int = 101, eps1_min: float = 1e-6) -> OrbitPiece:
    e = _grid(eps1_min, 1.0, n, log=True)
    if k <= 2:
        pts = [(float(x), gamma1_plus_pulled(float(x))) for x in e]
    else:
        pts = [(float(x), gamma1_plus_pushed(float(x), k)) for x in e]
    return OrbitPiece("gamma1-plus", Chart.K1, "eps1", "v1", pts)


def sample_gamma1_minus(k: float, n: int = 101, r1_min: float = 1e-4, cfg=None) -> OrbitPiece:
    """``Gamma1-`` in ``{e1 = 0}``: explicit for ``k >= 2``, integrated otherwise."""
    if k >= 2:
        r = _grid(r1_min, 1.0, n, log=True)
        return OrbitPiece("gamma1-minus", Chart.K1, "r1", "v1", [(float(x), gamma1_minus_pushed(float(x), k)) for x in r])
    from .shooting import unstable_manifold_trace  # deferred: shooting imports charts

    trace = unstable_manifold_trace(k, c_crit(k), r1_min, cfg)
    pts = [(U, V / U) for _, U, V in trace.rows]
    pts.sort()
    return OrbitPiece("gamma1-minus", Chart.K1, "r1", "v1", pts)


@dataclass
class SingularOrbit:
    """The concatenation ``Q2+ , Gamma2 , P2in , Gamma1+ , P1 (or P1_hat) , Gamma1- , Q1-``."""

    k: float
    pieces: list[OrbitPiece]
    junctions: dict[str, ChartPoint]


def singular_orbit(k: float, n: int = 101, cfg=None) -> SingularOrbit:
    if not k > 0:
        raise ValueError("k must be positive")
    c0 = c_crit(k)
    p2_in = ChartPoint(Chart.K2, (1.0, -c0, 0.0))
    junctions = {
        "Q2+": ChartPoint(Chart.K2, (0.0, 0.0, 0.0)),
        "P2_in": p2_in,
        "P1_out": kappa21(p2_in),
        "P1" if k <= 2 else "P1_hat": ChartPoint(Chart.K1, (0.0, -1.0 if k <= 2 else -0.5 * k, 0.0)),
        "Q1-": ChartPoint(Chart.K1, (1.0, 0.0, 0.0)),
    }
    pieces = [sample_gamma2(k, n), sample_gamma1_plus(k, n), sample_gamma1_minus(k, n, cfg=cfg)]
    return SingularOrbit(k, pieces, junctions)


def pushed_minus_blowdown_matches(r1: float, k: float) -> float:
    """Difference between ``Gamma1-`` blown down and the explicit uncut front at ``U = r1``."""
    return r1 * gamma1_minus_pushed(r1, k) - explicit_pushed_orbit(r1, k)
