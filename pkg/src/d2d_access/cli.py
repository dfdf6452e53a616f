"""Command-line front end: analyze, simulate, search, reproduce."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict, replace

from . import analytic
from .access import default_search_grid, search_threshold
from .config import parse_config
from .export import RunManifest, export_reports, format_number, reports_to_csv, reports_to_json
from .harness import ExperimentPlan, SweepError, run_sweep
from .model import ConfigError, derive_constants

FIGURE_BETA_DB = tuple(float(b) for b in range(-10, 21, 2))
_LAMBDA_GRID = tuple(float(f"{k}e-5") for k in range(2, 11))

# (density sweep, beta sweep in dB) per figure; all use the standard scheme set
FIGURES = {
    "fig2": (_LAMBDA_GRID, (5.0,)),
    "fig3": (_LAMBDA_GRID, (5.0,)),
    "fig4": ((2e-5,), FIGURE_BETA_DB),
    "fig5": ((6e-5,), FIGURE_BETA_DB),
    "fig6": ((2e-5, 6e-5), FIGURE_BETA_DB),
}


def _overrides(args) -> dict:
    out = {}
    if args.seed is not None:
        out["run.seed"] = str(args.seed)
    if args.realizations is not None:
        out["run.realizations"] = str(args.realizations)
    if args.lam is not None:
        out["sweep.lambda"] = args.lam
    if args.beta_db is not None:
        out["sweep.beta_db"] = args.beta_db
    if args.scheme:
        out["sweep.schemes"] = ",".join(args.scheme)
    return out


def _emit(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _write_reports(reports, plan: ExperimentPlan, args) -> None:
    if args.out is None:
        text = reports_to_csv(reports) if args.format == "csv" else reports_to_json(reports, RunManifest.create(plan))
        sys.stdout.write(text)
    else:
        export_reports(reports, args.format, args.out, RunManifest.create(plan, [args.out]))


def cmd_analyze(args) -> int:
    plan = parse_config(args.config, _overrides(args))
    cfg = plan.cfg
    lam = plan.density_sweep[0]
    beta_db = plan.beta_sweep_db[0]
    beta = analytic.db_to_linear(beta_db)
    consts = derive_constants(cfg.with_density(lam))
    unc = analytic.optimal_unconditional(beta, cfg, lam)
    cond = analytic.optimal_conditional(beta, cfg, lam)
    values = {
        "lambda": lam,
        "beta_db": beta_db,
        "k_alpha": consts.k_alpha,
        "c_alpha": consts.c_alpha,
        "beta_activation": consts.beta_activation,
        "beta_activation_db": consts.beta_activation_db,
        "unconditional": asdict(unc),
        "conditional": asdict(cond),
        "coverage_approx": analytic.coverage_prob_approx(beta, cfg, lam),
        "coverage_exact": analytic.coverage_prob_exact(beta, cfg, lam),
        "ase_no_ac": analytic.ase_no_ac(beta, cfg, lam),
        "ase_unconditional": analytic.ase_unconditional(unc.ps_star, beta, cfg, lam),
        "sum_rate_no_ac": analytic.sum_rate_analytic(cfg, lam),
    }
    if args.format == "json":
        _emit(json.dumps(values, indent=2) + "\n", args.out)
        return 0
    lines = []
    for key, value in values.items():
        if isinstance(value, dict):
            for sub, v in value.items():
                lines.append(f"{key}.{sub} = {v if isinstance(v, (str, bool)) else repr(float(v))}")
        else:
            lines.append(f"{key} = {value!r}")
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_simulate(args) -> int:
    plan = parse_config(args.config, _overrides(args))
    reports = run_sweep(plan, workers=args.workers)
    _write_reports(reports, plan, args)
    return 0


def cmd_search(args) -> int:
    plan = parse_config(args.config, _overrides(args))
    rows = ["lambda,beta_db,g_best_db,ase_best,n_realizations,grid_size"]
    for lam, beta_db in plan.points():
        beta = analytic.db_to_linear(beta_db)
        grid = default_search_grid(beta)
        g, ase = search_threshold(grid, plan.cfg, lam, beta, plan.n_realizations, plan.master_seed)
        g_db = "" if g == 0 else format_number(analytic.linear_to_db(g))
        rows.append(
            f"{format_number(lam)},{format_number(beta_db)},{g_db},{format_number(ase)},{plan.n_realizations},{len(grid)}"
        )
    _emit("\n".join(rows) + "\n", args.out)
    return 0


def figure_plan(name: str, base: ExperimentPlan) -> ExperimentPlan:
    densities, betas = FIGURES[name]
    return replace(base, density_sweep=densities, beta_sweep_db=betas, cfg=base.cfg.with_density(densities[0]))


def cmd_reproduce(args) -> int:
    overrides = {k: v for k, v in _overrides(args).items() if k.startswith("run.")}
    plan = figure_plan(args.figure, parse_config(args.config, overrides))
    reports = run_sweep(plan, workers=args.workers)
    _write_reports(reports, plan, args)
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value config file")
    common.add_argument("--seed", type=int, help="master seed (64-bit unsigned)")
    common.add_argument("--realizations", type=int, help="Monte Carlo realizations per point")
    common.add_argument("--lambda", dest="lam", help="D2D density per m^2 (comma-separated for sweeps)")
    common.add_argument("--beta-db", dest="beta_db", help="target SIR in dB (comma-separated for sweeps)")
    common.add_argument("--scheme", action="append", help="scheme label; repeatable")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--workers", type=int, default=1, help="processes for sweep points")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="d2d-access", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("analyze", parents=[common], help="closed-form results for one point").set_defaults(func=cmd_analyze)
    sub.add_parser("simulate", parents=[common], help="run a sweep plan").set_defaults(func=cmd_simulate)
    sub.add_parser("search", parents=[common], help="exhaustive threshold search").set_defaults(func=cmd_search)
    rep = sub.add_parser("reproduce", parents=[common], help="sweep data for one figure")
    rep.add_argument("figure", choices=sorted(FIGURES))
    rep.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as err:
        print(f"error: {err}", file=sys.stderr)
        return 2
    except SweepError as err:
        print(f"error: {err}", file=sys.stderr)
        if err.reports:
            _write_reports(err.reports, parse_config(args.config, _overrides(args)), args)
        return 1
    except OSError as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
