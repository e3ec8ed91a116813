"""Command-line front end: ``speed``, ``sweep``, ``orbit``, ``asym`` and ``verify``.

Exit codes: 0 success, 1 partial data failure, 2 usage or solver error.
Settings are resolved as CLI flags > ``--config`` JSON file > built-in defaults.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import sys
from dataclasses import asdict

from . import asymptotics, charts, verify
from .model import CutoffVariant, ModelParams, burgers_speed, c_crit
from .ode import IntegrationError, IntegratorConfig
from .shooting import BracketError, integrate_to_level, solve_speed
from .sweep import SweepSpec, fits, gnuplot_script, rows_to_csv, run_sweep

EXIT_OK, EXIT_PARTIAL, EXIT_ERROR = 0, 1, 2

DEFAULTS = {
    "k": 4.0,
    "eps": 1e-3,
    "eps_min": 1e-4,
    "eps_max": 1e-2,
    "points": 12,
    "variant": CutoffVariant.CUT_BOTH.value,
    "tolerances": {"rel": 1e-10, "abs": 1e-12, "event": 1e-12},
    "seed_offset": 1e-8,
    "max_steps": 200_000,
    "r0": 0.1,
    "jobs": 1,
}

PIECES = ("gamma2", "gamma1-plus", "gamma1-minus", "phase")


class UsageError(Exception):
    pass


def _load_config(path: str | None) -> dict:
    cfg = json.loads(json.dumps(DEFAULTS))
    if path is None:
        return cfg
    try:
        with open(path, encoding="utf-8") as fh:
            user = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(user, dict):
        raise UsageError("config file must hold a JSON object")
    unknown = set(user) - set(DEFAULTS)
    if unknown:
        raise UsageError(f"unknown config keys: {sorted(unknown)}")
    tol = user.pop("tolerances", None)
    if tol is not None:
        bad = set(tol) - set(DEFAULTS["tolerances"])
        if bad:
            raise UsageError(f"unknown tolerance keys: {sorted(bad)}")
        cfg["tolerances"].update(tol)
    cfg.update(user)
    return cfg


def resolve_settings(args: argparse.Namespace) -> dict:
    """Merge defaults, the optional config file and explicitly given flags."""
    cfg = _load_config(args.config)
    for key in ("k", "eps", "eps_min", "eps_max", "points", "variant", "seed_offset", "max_steps", "r0", "jobs"):
        val = getattr(args, key, None)
        if val is not None:
            cfg[key] = val
    for key in ("rel", "abs", "event"):
        val = getattr(args, f"{key}_tol", None)
        if val is not None:
            cfg["tolerances"][key] = val
    return cfg


def integrator_config(s: dict) -> IntegratorConfig:
    t = s["tolerances"]
    return IntegratorConfig(
        rel_tol=t["rel"], abs_tol=t["abs"], max_steps=int(s["max_steps"]), event_tol=t["event"], seed_offset=s["seed_offset"]
    )


@contextlib.contextmanager
def _open_out(path: str):
    if path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _emit_report(args, report: dict, lines: list[str]):
    with _open_out(args.out) as fh:
        if args.json:
            json.dump(report, fh, indent=2, sort_keys=True)
            fh.write("\n")
        else:
            fh.write("\n".join(lines) + "\n")


def _fmt(x) -> str:
    return "n/a" if x is None else f"{x:.15g}"


def cmd_speed(args, s) -> int:
    k, eps = float(s["k"]), float(s["eps"])
    variant = CutoffVariant.parse(s["variant"])
    cc = c_crit(k)
    report = {"k": k, "eps": eps, "variant": variant.value, "c_crit": cc, "regime": asymptotics.regime(k).value}
    if variant is CutoffVariant.BURGERS_CUT_ADVECTION:
        c = burgers_speed(eps, k)
        report.update(c=c, c_hat=c, delta_c=0.5 * k - c, abs_err=0.0, solver="closed form")
        report["c_crit"] = 0.5 * k
    else:
        res = solve_speed(ModelParams(k, eps, variant), integrator_config(s))
        c_as = asymptotics.c_hat(eps, k)
        report.update(
            c=res.c,
            c_hat=c_as,
            delta_c=cc - res.c,
            abs_err=abs(res.c - c_as),
            solver={"residual": res.residual, "bracket": list(res.bracket), "iterations": res.iterations},
        )
    lines = [
        f"k        = {_fmt(k)}",
        f"eps      = {_fmt(eps)}",
        f"variant  = {variant.value}",
        f"regime   = {report['regime']}",
        f"c_crit   = {_fmt(report['c_crit'])}",
        f"c        = {_fmt(report['c'])}",
        f"c_hat    = {_fmt(report['c_hat'])}",
        f"delta_c  = {_fmt(report['delta_c'])}",
        f"|c-c_hat|= {_fmt(report['abs_err'])}",
    ]
    if isinstance(report["solver"], dict):
        sv = report["solver"]
        lines.append(f"solver   : residual={sv['residual']:.3e} bracket=[{sv['bracket'][0]:.15g}, {sv['bracket'][1]:.15g}] iterations={sv['iterations']}")
    else:
        lines.append(f"solver   : {report['solver']}")
    _emit_report(args, report, lines)
    return EXIT_OK


def cmd_sweep(args, s) -> int:
    k = float(s["k"])
    try:
        spec = SweepSpec(k, float(s["eps_min"]), float(s["eps_max"]), int(s["points"]), bool(args.compare_variants))
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    rows = run_sweep(spec, integrator_config(s), jobs=int(s["jobs"]))
    fit = fits(rows, k)
    failed = [r for r in rows if r.error is not None]
    if args.json:
        report = {
            "k": k,
            "rows": [
                {
                    "eps": r.eps,
                    "c_numeric": r.c_numeric,
                    "c_asymptotic": r.c_asymptotic,
                    "abs_err": r.abs_err,
                    "gamma_numeric": r.gamma_numeric,
                    "c_minus_gamma": r.c_minus_gamma,
                    "error": r.error,
                }
                for r in rows
            ],
            "fits": {name: f.as_dict() for name, f in fit.items()},
        }
        _emit_report(args, report, [])
    else:
        with _open_out(args.out) as fh:
            fh.write(rows_to_csv(rows, spec.compare_variants))
        for name, f in fit.items():
            print(f"fit {name}: slope={f.slope:.6f} intercept={f.intercept:.6f} r2={f.r_squared:.6f}", file=sys.stderr)
    for r in failed:
        print(f"row eps={r.eps:.6e} failed: {r.error}", file=sys.stderr)
    if args.plot_script:
        data = args.out if args.out != "-" else "sweep.csv"
        with open(args.plot_script, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(gnuplot_script(data, k, spec.compare_variants))
    return EXIT_PARTIAL if failed else EXIT_OK


def _orbit_rows(args, s) -> list[tuple[float, float, float]]:
    """``(param, coord1, coord2)`` rows.

    Closed-form pieces give (parameter, orbit value, remaining chart
    coordinate, which is 0 on the singular orbit); ``phase`` gives ``(xi, U, V)``.
    """
    k = float(s["k"])
    n = int(args.n)
    piece = args.piece
    if piece == "gamma2":
        return [(u, v, 0.0) for u, v in charts.sample_gamma2(k, n).samples]
    if piece == "gamma1-plus":
        return [(e, v, 0.0) for e, v in charts.sample_gamma1_plus(k, n).samples]
    if piece == "gamma1-minus":
        return [(r, v, 0.0) for r, v in charts.sample_gamma1_minus(k, n, cfg=integrator_config(s)).samples]
    eps = float(args.eps) if args.eps is not None else 0.0
    if args.c in (None, "crit"):
        c = c_crit(k) if eps == 0 else solve_speed(ModelParams(k, eps, s["variant"]), integrator_config(s)).c
    else:
        try:
            c = float(args.c)
        except ValueError as exc:
            raise UsageError(f"--c must be a number or 'crit', got {args.c!r}") from exc
    floor = eps if eps > 0 else float(args.u_min)
    return list(integrate_to_level(k, c, floor, integrator_config(s), record=True).trace.rows)


def cmd_orbit(args, s) -> int:
    rows = _orbit_rows(args, s)
    if args.json:
        _emit_report(args, {"piece": args.piece, "k": float(s["k"]), "columns": ["param", "coord1", "coord2"], "rows": [list(r) for r in rows]}, [])
        return EXIT_OK
    with _open_out(args.out) as fh:
        fh.write("param,coord1,coord2\n")
        for r in rows:
            fh.write(",".join(f"{x:.15e}" for x in r) + "\n")
    return EXIT_OK


def cmd_asym(args, s) -> int:
    k = float(s["k"])
    eps = float(s["eps"])
    r0 = float(s["r0"])
    reg = asymptotics.regime(k)
    report = {"k": k, "eps": eps, "regime": reg.value, "c_crit": c_crit(k)}
    na = "not applicable"
    if reg is asymptotics.Regime.PULLED:
        report.update(
            delta_c_pulled=asymptotics.delta_c_pulled(eps) if eps > 0 else 0.0,
            alpha=na, exponent=na, nu_r0=na, delta_r0=na, delta_r0_limit=na, kappa=na, normal_form_delta_c=na,
        )
    else:
        report.update(
            delta_c_pushed=asymptotics.delta_c_pushed(eps, k) if eps > 0 else 0.0,
            alpha=asymptotics.alpha_limit(k),
            exponent=asymptotics.exponent(k),
            r0=r0,
            nu_r0=asymptotics.nu(r0, k),
            delta_r0=asymptotics.delta_r0(r0, k),
            delta_r0_limit=asymptotics.delta_r0_limit(k),
            alpha_r0=asymptotics.alpha_r0(r0, k),
            kappa=asymptotics.kappa_exponent(k),
        )
        if args.normal_form:
            report["normal_form_delta_c"] = asymptotics.delta_c_normal_form_root(eps, r0, k)
    report["c_hat"] = asymptotics.c_hat(eps, k)
    lines = [f"{key:<20} = {val if isinstance(val, str) else _fmt(val)}" for key, val in report.items()]
    _emit_report(args, report, lines)
    return EXIT_OK


def cmd_verify(args, s) -> int:
    results = verify.run(args.level)
    failed = [r for r in results if not r.ok]
    lines = [
        f"{'PASS' if r.ok else 'FAIL'} {r.module}.{r.invariant}: observed {r.observed}; expected {r.expected} ({r.seconds:.2f}s)"
        for r in results
    ]
    lines.append(f"{len(results) - len(failed)}/{len(results)} checks passed")
    _emit_report(args, {"level": args.level, "results": [asdict(r) for r in results], "failed": len(failed)}, lines)
    return EXIT_ERROR if failed else EXIT_OK


def _common(parser: argparse.ArgumentParser):
    g = parser.add_argument_group("output and configuration")
    g.add_argument("--out", default="-", help="output path, '-' for stdout (default)")
    g.add_argument("--json", action="store_true", help="machine-readable JSON report")
    g.add_argument("--config", help="JSON config file (overridden by flags)")
    g.add_argument("--show-config", action="store_true", help="print the resolved settings and exit")
    g.add_argument("--rel-tol", type=float, dest="rel_tol")
    g.add_argument("--abs-tol", type=float, dest="abs_tol")
    g.add_argument("--event-tol", type=float, dest="event_tol")
    g.add_argument("--seed-offset", type=float, dest="seed_offset")
    g.add_argument("--max-steps", type=int, dest="max_steps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="burgers-fkpp", description="Front speeds of the Burgers-FKPP equation with cut-off.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("speed", help="shooting speed c(eps) with its asymptotic estimate")
    p.add_argument("--k", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--variant", choices=[v.value for v in CutoffVariant])
    _common(p)
    p.set_defaults(func=cmd_speed)

    p = sub.add_parser("sweep", help="log-spaced eps sweep to CSV with slope fits")
    p.add_argument("--k", type=float)
    p.add_argument("--eps-min", type=float, dest="eps_min")
    p.add_argument("--eps-max", type=float, dest="eps_max")
    p.add_argument("--points", type=int)
    p.add_argument("--compare-variants", action="store_true", help="also solve the reaction-only cut-off")
    p.add_argument("--plot-script", help="write a gnuplot script for the CSV here")
    p.add_argument("--jobs", type=int, help="worker processes for the rows")
    _common(p)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("orbit", help="singular-orbit pieces or the phase-plane orbit to CSV")
    p.add_argument("--k", type=float)
    p.add_argument("--piece", required=True, help=f"one of {', '.join(PIECES)}")
    p.add_argument("--c", help="speed for the phase orbit, a number or 'crit'")
    p.add_argument("--eps", type=float)
    p.add_argument("--variant", choices=[v.value for v in CutoffVariant])
    p.add_argument("--n", type=int, default=101, help="samples per closed-form piece")
    p.add_argument("--u-min", type=float, default=1e-3, dest="u_min", help="lowest U of the uncut phase orbit")
    _common(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("asym", help="closed-form asymptotic quantities")
    p.add_argument("--k", type=float)
    p.add_argument("--eps", type=float)
    p.add_argument("--r0", type=float)
    p.add_argument("--normal-form", action="store_true", help="also solve the normal-form transit relation")
    _common(p)
    p.set_defaults(func=cmd_asym)

    p = sub.add_parser("verify", help="run the invariant checks")
    p.add_argument("--level", choices=("fast", "full"), default="fast")
    _common(p)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        settings = resolve_settings(args)
        if args.show_config:
            json.dump(settings, sys.stdout, indent=2, sort_keys=True)
            sys.stdout.write("\n")
            return EXIT_OK
        if getattr(args, "piece", None) is not None and args.piece not in PIECES:
            raise UsageError(f"unknown orbit piece {args.piece!r}; choose from {', '.join(PIECES)}")
        return args.func(args, settings)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (BracketError, IntegrationError, ArithmeticError, ValueError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
