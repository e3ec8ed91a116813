"""Log-spaced epsilon sweeps of the shooting speed and log-log slope fits."""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import asymptotics
from .model import CutoffVariant, ModelParams, c_crit
from .ode import IntegratorConfig
from .shooting import solve_speed


@dataclass(frozen=True)
class SweepSpec:
    k: float
    eps_min: float
    eps_max: float
    points: int = 12
    compare_variants: bool = False

    def __post_init__(self):
        if not 0 < self.eps_min < self.eps_max < 1:
            raise ValueError("need 0 < eps_min < eps_max < 1")
        if self.points < 2:
            raise ValueError("points must be >= 2")

    def grid(self) -> np.ndarray:
        return np.logspace(math.log10(self.eps_min), math.log10(self.eps_max), self.points)


@dataclass(frozen=True)
class SweepRow:
    eps: float
    c_numeric: float | None
    c_asymptotic: float
    gamma_numeric: float | None = None
    error: str | None = None

    @property
    def abs_err(self) -> float | None:
        return None if self.c_numeric is None else abs(self.c_numeric - self.c_asymptotic)

    @property
    def c_minus_gamma(self) -> float | None:
        if self.c_numeric is None or self.gamma_numeric is None:
            return None
        return self.c_numeric - self.gamma_numeric


@dataclass(frozen=True)
class SlopeFit:
    slope: float
    intercept: float
    r_squared: float

    def as_dict(self):
        return {"slope": self.slope, "intercept": self.intercept, "r_squared": self.r_squared}


def slope_fit(x, y) -> SlopeFit:
    """Least-squares line through ``(ln x, ln |y|)``."""
    lx = np.log(np.asarray(x, dtype=float))
    ly = np.log(np.abs(np.asarray(y, dtype=float)))
    if lx.size < 2:
        raise ValueError("need at least two points for a slope fit")
    slope, intercept = np.polyfit(lx, ly, 1)
    resid = ly - (slope * lx + intercept)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot if ss_tot > 0 else 1.0
    return SlopeFit(float(slope), float(intercept), r2)


def sweep_row(args) -> SweepRow:
    k, eps, compare, cfg = args
    c_as = asymptotics.c_hat(eps, k)
    try:
        c = solve_speed(ModelParams(k, eps, CutoffVariant.CUT_BOTH), cfg).c
        g = solve_speed(ModelParams(k, eps, CutoffVariant.CUT_REACTION_ONLY), cfg).c if compare else None
    except (ArithmeticError, RuntimeError, ValueError) as exc:
        return SweepRow(float(eps), None, c_as, None, f"{type(exc).__name__}: {exc}")
    return SweepRow(float(eps), c, c_as, g)


def run_sweep(spec: SweepSpec, cfg: IntegratorConfig | None = None, jobs: int = 1) -> list[SweepRow]:
    """Rows in increasing ``eps`` order whatever the completion order."""
    cfg = cfg or IntegratorConfig()
    tasks = [(spec.k, float(e), spec.compare_variants, cfg) for e in spec.grid()]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(sweep_row, tasks))
    return [sweep_row(t) for t in tasks]


def fits(rows: list[SweepRow], k: float) -> dict[str, SlopeFit]:
    """Slope fits of ``|c - c_hat|``, ``c_crit - c`` and, if present, ``|c - gamma|``."""
    ok = [r for r in rows if r.c_numeric is not None]
    out = {}
    if len(ok) >= 2:
        e = [r.eps for r in ok]
        out["abs_err"] = slope_fit(e, [r.abs_err for r in ok])
        out["deficit"] = slope_fit(e, [c_crit(k) - r.c_numeric for r in ok])
        g = [r for r in ok if r.gamma_numeric is not None]
        if len(g) >= 2:
            out["c_minus_gamma"] = slope_fit([r.eps for r in g], [r.c_minus_gamma for r in g])
    return out


def _fmt(x) -> str:
    return "" if x is None else f"{x:.15e}"


def rows_to_csv(rows: list[SweepRow], compare: bool) -> str:
    head = ["eps", "c_numeric", "c_asymptotic", "abs_err"]
    if compare:
        head += ["gamma_numeric", "c_minus_gamma"]
    lines = [",".join(head)]
    for r in rows:
        vals = [r.eps, r.c_numeric, r.c_asymptotic, r.abs_err]
        if compare:
            vals += [r.gamma_numeric, r.c_minus_gamma]
        lines.append(",".join(_fmt(v) for v in vals))
    return "\n".join(lines) + "\n"


def gnuplot_script(csv_path: str, k: float, compare: bool) -> str:
    """A gnuplot script drawing the sweep columns on log-log axes."""
    lines = [
        "set datafile separator ','",
        "set logscale xy",
        "set key left top",
        "set xlabel 'eps'",
        f"set title 'k = {k:g}'",
        f"plot '{csv_path}' using 1:4 skip 1 with linespoints title '|c - c_hat|'"
        + (f", '' using 1:(abs($6)) skip 1 with linespoints title '|c - gamma|'" if compare else ""),
        "pause -1",
    ]
    return "\n".join(lines) + "\n"
