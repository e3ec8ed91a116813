"""Travelling-wave phase plane of the Burgers-FKPP equation with cut-off.

In the co-moving frame ``xi = x - c t`` a front ``u(x, t) = U(xi)`` solves

    U' = V,
    V' = -c V + [k U V - U (1 - U)] H(U - eps)

(``CutBoth``); the other variants move the Heaviside factor. ``H(0) = 0``,
so the cut-off is already active at ``U = eps``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class CutoffVariant(str, enum.Enum):
    CUT_BOTH = "cut-both"
    CUT_REACTION_ONLY = "cut-reaction"
    NO_CUTOFF = "none"
    BURGERS_CUT_ADVECTION = "burgers"

    @classmethod
    def parse(cls, value) -> "CutoffVariant":
        if isinstance(value, cls):
            return value
        aliases = {
            "cutboth": cls.CUT_BOTH,
            "both": cls.CUT_BOTH,
            "cutreactiononly": cls.CUT_REACTION_ONLY,
            "reaction": cls.CUT_REACTION_ONLY,
            "cut-reaction-only": cls.CUT_REACTION_ONLY,
            "nocutoff": cls.NO_CUTOFF,
            "no-cutoff": cls.NO_CUTOFF,
            "burgerscutadvection": cls.BURGERS_CUT_ADVECTION,
        }
        key = str(value).strip().lower()
        for member in cls:
            if key == member.value:
                return member
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown cut-off variant {value!r}")


@dataclass(frozen=True)
class ModelParams:
    k: float
    eps: float
    variant: CutoffVariant = CutoffVariant.CUT_BOTH

    def __post_init__(self):
        if not (self.k >= 0 and math.isfinite(self.k)):
            raise ValueError(f"k must be finite and non-negative, got {self.k}")
        if not (0 <= self.eps < 1):
            raise ValueError(f"eps must lie in [0, 1), got {self.eps}")
        object.__setattr__(self, "variant", CutoffVariant.parse(self.variant))

    @property
    def pushed(self) -> bool:
        return self.k > 2


@dataclass(frozen=True)
class PhaseState:
    U: float
    V: float


Q_MINUS = PhaseState(1.0, 0.0)
Q_PLUS = PhaseState(0.0, 0.0)


def heaviside(x: float) -> float:
    return 1.0 if x > 0 else 0.0


def vector_field(s: PhaseState, p: ModelParams, c: float) -> tuple[float, float]:
    """Return ``(U', V')`` for the variant selected by ``p``."""
    U, V = s.U, s.V
    v = p.variant
    if v is CutoffVariant.NO_CUTOFF:
        h = 1.0
    else:
        h = heaviside(U - p.eps)
    if v is CutoffVariant.CUT_BOTH or v is CutoffVariant.NO_CUTOFF:
        dV = -c * V + (p.k * U * V - U * (1.0 - U)) * h
    elif v is CutoffVariant.CUT_REACTION_ONLY:
        dV = -c * V + p.k * U * V - U * (1.0 - U) * h
    else:
        dV = -c * V + p.k * U * V * h
    return V, dV


def c_crit(k: float) -> float:
    """Minimal front speed without cut-off: 2 (pulled) or ``k/2 + 2/k`` (pushed)."""
    if k < 0:
        raise ValueError("k must be non-negative")
    return 2.0 if k <= 2 else 0.5 * k + 2.0 / k


def explicit_pushed_orbit(U: float, k: float) -> float:
    """The exact connection ``V = -(k/2) U (1 - U)`` at ``c = c_crit(k)``, ``k >= 2``."""
    return -0.5 * k * U * (1.0 - U)


def inner_manifold_V(U: float, p: ModelParams, c: float) -> float:
    """Stable manifold of the origin in the cut-off region ``0 <= U <= eps``.

    Without reaction the inner field is linear in ``V``; for ``CutReactionOnly``
    the surviving advection adds the ``(k/2) U**2`` term.
    """
    if p.variant is CutoffVariant.NO_CUTOFF:
        raise ValueError("the uncut system has no inner region")
    if p.variant is CutoffVariant.CUT_REACTION_ONLY:
        return -c * U + 0.5 * p.k * U * U
    return -c * U


def burgers_speed(eps: float, k: float) -> float:
    """Front speed ``(k/2)(1 - eps**2)`` of Burgers' equation with cut advection.

    Outer orbit ``V = -cU + (k/2)U**2 - k/2 + c`` through ``(1, 0)`` must meet
    the inner line ``V = -cU`` at ``U = eps``.
    """
    if not 0 <= eps < 1:
        raise ValueError("eps must lie in [0, 1)")
    # integer literals keep Fraction / rational inputs exact
    return k * (1 - eps * eps) / 2


def jacobian(s: PhaseState, k: float, c: float) -> np.ndarray:
    """Jacobian of the uncut field at ``s``."""
    return np.array([[0.0, 1.0], [2.0 * s.U - 1.0 + k * s.V, -c + k * s.U]])


@dataclass(frozen=True)
class EigenPair:
    value: float
    vector: tuple[float, float]


def equilibria_eigen(point: PhaseState, k: float, c: float) -> list[EigenPair]:
    """Eigen-decomposition of the uncut linearisation at ``Q-`` or ``Q+``.

    Eigenvectors are scaled so that their ``V`` component is 1, the convention
    used for the saddle ``Q-``; a repeated eigenvalue yields a single pair.
    Complex eigenvalues (spiral ``Q+`` for ``c < 2``) raise ``ValueError``.
    """
    if (point.U, point.V) not in ((1.0, 0.0), (0.0, 0.0)):
        raise ValueError(f"({point.U}, {point.V}) is not an equilibrium")
    trace = -c + k * point.U
    det = -(2.0 * point.U - 1.0)
    disc = trace * trace - 4.0 * det
    if disc < -1e-14:
        raise ValueError("complex eigenvalues: equilibrium is a focus")
    root = math.sqrt(max(disc, 0.0))
    pairs = []
    lams = [0.5 * (trace + root), 0.5 * (trace - root)]
    if root == 0.0:
        lams = lams[:1]
    for lam in lams:
        # first row of (J - lam I) w = 0 with w = (x, 1); det J = +-1 so lam != 0
        pairs.append(EigenPair(lam, (1.0 / lam, 1.0)))
    return pairs


@dataclass(frozen=True)
class TrappingReport:
    inside: bool
    flux_upper: float
    flux_lower: float


def trapping_flux_upper(U: float) -> float:
    """Normal flux ``(0, 1) . F`` across ``{V = 0}``; non-positive on ``[0, 1]``."""
    return -U * (1.0 - U)


def trapping_flux_lower(U: float, k: float) -> float:
    """Flux ``(-dV/dU, 1) . F`` across ``{V = U(U - 1)}``, i.e. ``U**2 (U - 1)(k - 2)``."""
    return U * U * (U - 1.0) * (k - 2.0)


def trapping_region_check(s: PhaseState, k: float) -> TrappingReport:
    """Membership in the region between ``V = U(U - 1)`` and ``V = 0`` (used at ``c = 2``)."""
    if not 0 <= s.U <= 1:
        raise ValueError("U must lie in [0, 1]")
    inside = s.U * (s.U - 1.0) <= s.V <= 0.0
    return TrappingReport(inside, trapping_flux_upper(s.U), trapping_flux_lower(s.U, k))
