"""Invariant checks across all modules, run by ``burgers-fkpp verify``.

``fast`` covers the closed-form identities and a few shooting solves;
``full`` adds the epsilon sweeps with their log-log slope fits.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from . import asymptotics, charts, model, specfn
from .ode import IntegratorConfig
from .shooting import integrate_to_level, matching_residual, solve_speed
from .sweep import SweepSpec, fits, run_sweep


@dataclass(frozen=True)
class CheckResult:
    module: str
    invariant: str
    ok: bool
    observed: str
    expected: str
    seconds: float = 0.0


def _max(values) -> float:
    return float(max(values))


# each check returns (ok, observed, expected)

def check_lambert_residual():
    xs = np.concatenate([np.linspace(-math.exp(-1.0), 0.0, 200), np.linspace(0.0, 10.0, 400)])
    worst = _max(abs(specfn.lambert_w0(x) * math.exp(specfn.lambert_w0(x)) - x) / max(1.0, abs(x)) for x in xs)
    return worst <= 1e-12, f"{worst:.2e}", "<= 1e-12"


def check_gamma_reflection():
    worst = _max(
        abs(specfn.gamma(1 + x) * specfn.gamma(1 - x) * math.sin(math.pi * x) / (math.pi * x) - 1)
        for x in np.linspace(0.01, 0.99, 99)
    )
    return worst <= 1e-11, f"{worst:.2e}", "<= 1e-11"


def check_inc_beta_monotone():
    vals = [specfn.inc_beta(x, 1.25, 0.75) for x in np.linspace(0, 1, 201)]
    ok = all(b > a for a, b in zip(vals, vals[1:]))
    return ok, "increasing" if ok else "not increasing", "strictly increasing in x"


def check_hyp2f1_series():
    worst = 0.0
    for k in (2.5, 3.0, 4.0, 6.0):
        q = 4.0 / (k * k)
        for x in np.linspace(0.0, 0.9, 19):
            a = specfn.hyp2f1_via_beta(1 + q, q, 2 + q, x)
            b = specfn.hyp2f1_series(1 + q, q, 2 + q, x)
            worst = max(worst, abs(a - b))
    return worst <= 1e-10, f"{worst:.2e}", "<= 1e-10"


def check_explicit_orbit():
    worst = 0.0
    for k in (2.0, 3.0, 4.0, 6.0):
        c = model.c_crit(k)
        for U in np.linspace(0.01, 0.99, 100):
            V = model.explicit_pushed_orbit(U, k)
            dVdU = -0.5 * k * (1 - 2 * U)
            worst = max(worst, abs(dVdU * V - (-c * V + k * U * V - U * (1 - U))))
    return worst <= 1e-12, f"{worst:.2e}", "<= 1e-12"


def check_ccrit_shape():
    ks = np.linspace(0, 8, 801)
    vals = [model.c_crit(k) for k in ks]
    ok = all(v >= 2 for v in vals) and all((v == 2) == (k <= 2) for k, v in zip(ks, vals))
    jump = abs(model.c_crit(2.0 + 1e-9) - model.c_crit(2.0))
    return ok and jump < 1e-8, f"jump at 2: {jump:.1e}", "c_crit >= 2, = 2 iff k <= 2, continuous"


def check_cutoff_jump():
    worst = 0.0
    for k, eps, c, V in [(4.0, 0.01, 2.4, -0.03), (1.0, 0.1, 1.9, -0.2), (3.0, 0.2, 2.5, -0.1)]:
        p = model.ModelParams(k, eps)
        above = model.vector_field(model.PhaseState(eps * (1 + 1e-15), V), p, c)[1]
        at = model.vector_field(model.PhaseState(eps, V), p, c)[1]
        worst = max(worst, abs((above - at) - (k * eps * V - eps * (1 - eps))))
    return worst <= 1e-12, f"{worst:.2e}", "jump = k eps V - eps(1 - eps)"


def check_inner_manifold():
    worst = 0.0
    h = 1e-6
    for variant, slope in ((model.CutoffVariant.CUT_BOTH, lambda U, k, c: -c), (model.CutoffVariant.CUT_REACTION_ONLY, lambda U, k, c: -c + k * U)):
        p = model.ModelParams(4.0, 0.01, variant)
        for U in np.linspace(0.001, 0.009, 9):
            fd = (model.inner_manifold_V(U + h, p, 2.4) - model.inner_manifold_V(U - h, p, 2.4)) / (2 * h)
            worst = max(worst, abs(fd - slope(U, 4.0, 2.4)))
    return worst <= 1e-8, f"{worst:.2e}", "dV/dU matches inner field"


def check_kappa21_blowdown():
    rng = np.random.default_rng(7)
    worst = 0.0
    for u2, v2, r2 in zip(rng.uniform(0.01, 2, 200), rng.uniform(-5, 0, 200), rng.uniform(0, 0.5, 200)):
        p = charts.ChartPoint(charts.Chart.K2, (u2, v2, r2))
        a = charts.blow_down(p)
        b = charts.blow_down(charts.kappa21(p))
        worst = max(worst, *(abs(x - y) for x, y in zip(a, b)))
    return worst <= 1e-15, f"{worst:.2e}", "<= 1e-15"


def check_gamma1_plus_pulled_ode():
    worst = 0.0
    h = 1e-6
    for e in np.linspace(0.02, 0.98, 50):
        v = charts.gamma1_plus_pulled(e)
        fd = (charts.gamma1_plus_pulled(e + h) - charts.gamma1_plus_pulled(e - h)) / (2 * h)
        worst = max(worst, abs(fd - (v + 1) ** 2 / (e * v)))
    return worst <= 1e-6, f"{worst:.2e}", "<= 1e-6"


def check_gamma1_plus_pushed_residual():
    worst = 0.0
    for k in (2.5, 3.0, 4.0, 6.0):
        for e in np.logspace(-3, 0, 30):
            worst = max(worst, abs(charts.gamma1_plus_pushed_residual(charts.gamma1_plus_pushed(e, k), e, k)))
    return worst <= 1e-10, f"{worst:.2e}", "<= 1e-10"


def check_gamma1_minus_graph():
    worst = 0.0
    for k in (3.0, 4.0, 6.0):
        c = model.c_crit(k)
        for r in np.linspace(0.01, 0.99, 50):
            v = charts.gamma1_minus_pushed(r, k)
            dr, dv, _ = charts.k1_field(r, v, 0.0, k, c)
            worst = max(worst, abs(dv - 0.5 * k * dr))
    return worst <= 1e-12, f"{worst:.2e}", "<= 1e-12"


def check_gamma1_plus_monotone():
    e = np.linspace(0.01, 1.0, 100)
    a = [charts.gamma1_plus_pulled(x) for x in e]
    b = [charts.gamma1_plus_pushed(x, 4.0) for x in e]
    ok = all(y < x for x, y in zip(a, a[1:])) and all(y < x for x, y in zip(b, b[1:]))
    return ok, "decreasing" if ok else "not decreasing", "strictly decreasing in eps1"


def check_alpha_identity():
    worst = 0.0
    for k in np.linspace(2.1, 10, 40):
        x = 4 / k ** 2
        val = asymptotics.alpha_limit(k) * specfn.gamma(1 + x) * specfn.gamma(1 - x) * k ** (1 + 2 * x) / (2 * (k * k - 4) ** x)
        worst = max(worst, abs(val - 1))
    return worst <= 1e-12, f"{worst:.2e}", "<= 1e-12"


def check_variational_ode():
    worst = 0.0
    h = 1e-5
    for k in (2.0, 3.0, 4.0):
        for U in np.linspace(0.05, 0.95, 19):
            y = asymptotics.dVdc_at_ccrit(U, k)
            fd = (asymptotics.dVdc_at_ccrit(U + h, k) - asymptotics.dVdc_at_ccrit(U - h, k)) / (2 * h)
            worst = max(worst, abs(fd - (-1 + 4 / k ** 2 * y / (U * (1 - U)))))
    return worst <= 1e-6, f"{worst:.2e}", "<= 1e-6"


def check_dVdc_positive():
    ok = all(asymptotics.dVdc_at_ccrit(U, k) > 0 for k in (2.0, 2.5, 4.0, 8.0) for U in np.linspace(0.001, 0.999, 200))
    return ok, "positive" if ok else "sign change", "> 0 on (0, 1)"


def check_delta_r0_convergence():
    lim = asymptotics.delta_r0_limit(4.0)
    gaps = [abs(asymptotics.delta_r0(r, 4.0) - lim) for r in np.logspace(-2, -6, 25)]
    ok = all(b < a for a, b in zip(gaps, gaps[1:]))
    return ok, f"gap {gaps[0]:.2e} -> {gaps[-1]:.2e}", "monotone decrease as r0 -> 0"


def check_pushed_continuity():
    vals = [asymptotics.delta_c_pushed(1e-3, 2 + d) for d in (1e-1, 1e-2, 1e-3, 1e-4)]
    ok = all(b < a for a, b in zip(vals, vals[1:])) and vals[-1] < 1e-3
    return ok, f"{vals[-1]:.2e} at k = 2 + 1e-4", "-> 0 as k -> 2+"


def check_pushed_orbit_oracle():
    worst = 0.0
    for k in (3.0, 4.0, 6.0):
        c = model.c_crit(k)
        trace = integrate_to_level(k, c, 1e-3, record=True).trace
        worst = max(worst, _max(abs(V + 0.5 * k * U * (1 - U)) for _, U, V in trace.rows if 1e-3 <= U <= 1 - 1e-6))
    return worst <= 1e-6, f"{worst:.2e}", "<= 1e-6"


def check_residual_single_root():
    bad = []
    for k in (1.0, 2.0, 4.0):
        cc = model.c_crit(k)
        for eps in (1e-2, 1e-4):
            p = model.ModelParams(k, eps)
            signs = [matching_residual(c, p) > 0 for c in np.linspace(cc - 0.5, cc, 50)]
            changes = sum(a != b for a, b in zip(signs, signs[1:]))
            if changes != 1:
                bad.append((k, eps, changes))
    return not bad, f"violations {bad}" if bad else "one sign change each", "exactly one sign change"


def check_ordering():
    out = {}
    for k in (1.0, 4.0):
        cs = [solve_speed(model.ModelParams(k, e)).c for e in (1e-2, 1e-3, 1e-4)]
        out[k] = cs
    ok = all(a < b < c < model.c_crit(k) for k, (a, b, c) in out.items())
    return ok, "; ".join(f"k={k}: " + ", ".join(f"{c:.8f}" for c in v) for k, v in out.items()), "c(eps1) < c(eps2) < c_crit"


def check_trapping_containment():
    trace = integrate_to_level(1.5, 2.0, 1e-4, record=True).trace
    ok = all(U * (U - 1) <= V <= 0 for _, U, V in trace.rows)
    return ok, f"{len(trace)} samples", "U(U-1) <= V <= 0"


def check_variant_closeness():
    worst = -math.inf
    for eps in (1e-2, 1e-3):
        c = solve_speed(model.ModelParams(4.0, eps)).c
        g = solve_speed(model.ModelParams(4.0, eps, model.CutoffVariant.CUT_REACTION_ONLY)).c
        worst = max(worst, abs(c - g) - (model.c_crit(4.0) - c))
    return worst <= 0, f"max(|c-g| - (c_crit-c)) = {worst:.2e}", "<= 0"


def check_tolerance_halving():
    cfg = IntegratorConfig()
    diff = 0.0
    for k, eps in ((4.0, 1e-3), (1.0, 1e-4)):
        p = model.ModelParams(k, eps)
        diff = max(diff, abs(solve_speed(p, cfg).c - solve_speed(p, cfg.tightened(0.5)).c))
    return diff <= 1e-9, f"{diff:.2e}", "<= 1e-9"


def _sweep_fit(k, compare, key):
    rows = run_sweep(SweepSpec(k, 1e-4, 1e-2, 12, compare))
    return fits(rows, k)[key].slope


def check_slope_k4_deficit():
    s = _sweep_fit(4.0, False, "deficit")
    return abs(s - 0.75) <= 0.03, f"{s:.4f}", "0.75 +- 0.03"


def check_slope_k2sqrt2_deficit():
    s = _sweep_fit(2 * math.sqrt(2), False, "deficit")
    return abs(s - 0.5) <= 0.03, f"{s:.4f}", "0.50 +- 0.03"


def check_slope_k4_next_order():
    s = _sweep_fit(4.0, False, "abs_err")
    return abs(s - 1.5) <= 0.15, f"{s:.4f}", "1.5 +- 0.15"


def check_slope_k4_variants():
    s = _sweep_fit(4.0, True, "c_minus_gamma")
    return abs(s - 1.8) <= 0.2, f"{s:.4f}", "1.8 +- 0.2"


FAST = [
    ("specfn", "lambert_residual", check_lambert_residual),
    ("specfn", "gamma_reflection", check_gamma_reflection),
    ("specfn", "inc_beta_monotone", check_inc_beta_monotone),
    ("specfn", "hyp2f1_vs_series", check_hyp2f1_series),
    ("model", "explicit_orbit_exact", check_explicit_orbit),
    ("model", "c_crit_shape", check_ccrit_shape),
    ("model", "cutoff_jump", check_cutoff_jump),
    ("model", "inner_manifold_ode", check_inner_manifold),
    ("charts", "kappa21_blowdown", check_kappa21_blowdown),
    ("charts", "gamma1_plus_pulled_ode", check_gamma1_plus_pulled_ode),
    ("charts", "gamma1_plus_pushed_residual", check_gamma1_plus_pushed_residual),
    ("charts", "gamma1_minus_invariant_graph", check_gamma1_minus_graph),
    ("charts", "gamma1_plus_monotone", check_gamma1_plus_monotone),
    ("asymptotics", "alpha_identity", check_alpha_identity),
    ("asymptotics", "variational_ode", check_variational_ode),
    ("asymptotics", "dVdc_positive", check_dVdc_positive),
    ("asymptotics", "delta_r0_convergence", check_delta_r0_convergence),
    ("asymptotics", "pushed_continuity_k_to_2", check_pushed_continuity),
    ("shooting", "pushed_orbit_oracle", check_pushed_orbit_oracle),
    ("shooting", "residual_single_root", check_residual_single_root),
    ("shooting", "speed_ordering", check_ordering),
    ("shooting", "trapping_containment", check_trapping_containment),
    ("shooting", "variant_closeness", check_variant_closeness),
    ("shooting", "tolerance_halving", check_tolerance_halving),
]

FULL_EXTRA = [
    ("sweep", "slope_deficit_k4", check_slope_k4_deficit),
    ("sweep", "slope_deficit_k2sqrt2", check_slope_k2sqrt2_deficit),
    ("sweep", "slope_next_order_k4", check_slope_k4_next_order),
    ("sweep", "slope_variants_k4", check_slope_k4_variants),
]


def run(level: str = "fast") -> list[CheckResult]:
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    checks = FAST + (FULL_EXTRA if level == "full" else [])
    results = []
    for mod, name, fn in checks:
        t0 = time.perf_counter()
        try:
            ok, obs, exp = fn()
        except Exception as exc:  # a crashing check is a failed check
            ok, obs, exp = False, f"{type(exc).__name__}: {exc}", "no exception"
        results.append(CheckResult(mod, name, bool(ok), obs, exp, time.perf_counter() - t0))
    return results
