"""Command line interface.

Subcommands: sweep (Monte Carlo rows to CSV/JSON-lines), nstar (entropies
and the critical sample size), curves (agreement curves as CSV), check
(condition reports), dn (normalized-divergence curve as CSV).

Exit codes: 0 success, 2 configuration error, 3 enumeration budget error.
"""

from __future__ import annotations

import argparse
import sys
from math import log

from .channels import BalancedSet, BgtChannel, SbgChannel
from .conditions import (
    PROVEN_REGIME_NOTE,
    arcsine_inequality_check,
    bgt_witnesses,
    borell_bound_check,
    check_condition,
)
from .infotheory import dn_curve, n_star, output_entropy, prior_entropy
from .overlaps import (
    DEFAULT_HERMITE_ORDER,
    bgt_curves,
    default_grid,
    hermite_coeffs,
    sbg_curves,
)
from .priors import BudgetExceededError, DEFAULT_ENUMERATION_BUDGET, KSparsePrior
from .sweep import MODELS, SweepConfig, parse_beta_grid, run_sweep, write_rows

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_BUDGET = 3


def _add_model_flags(parser, *, need_dims=True):
    parser.add_argument("--model", choices=MODELS, default="bgt")
    if need_dims:
        parser.add_argument("--n", type=int, default=20, help="population dimension N")
        parser.add_argument("--k", type=int, default=3, help="sparsity")
    parser.add_argument("--q", type=float, default=0.5, help="no-hit test probability (bgt)")
    parser.add_argument(
        "--set",
        dest="region",
        default="",
        help="balanced interval union for sbg-custom, e.g. '-0.67449:0.67449'",
    )


def _build_region(args) -> BalancedSet:
    if args.model == "sbg-halfspace":
        return BalancedSet.half_space()
    if args.model == "sbg-symmetric":
        return BalancedSet.symmetric()
    if not args.region:
        raise ValueError("sbg-custom requires --set")
    return BalancedSet.parse(args.region)


def _build_channel(args, n_dims, k):
    if args.model == "bgt":
        return BgtChannel(n_dims, k, args.q)
    return SbgChannel(n_dims, k, _build_region(args))


def _write_text(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _read_config_file(path) -> dict:
    values = {}
    with open(path, encoding="utf-8") as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"bad config line {raw.rstrip()!r}; expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            values[key.replace("-", "_")] = value
    return values


def _cmd_nstar(args) -> int:
    prior = KSparsePrior(args.n, args.k)
    channel = _build_channel(args, args.n, args.k)
    h_theta = prior_entropy(prior)
    h_y = output_entropy(channel)
    print(f"H_theta_nats={h_theta:.10g}")
    print(f"H_Y_nats={h_y:.10g}")
    if args.bits:
        print(f"H_theta_bits={h_theta / log(2):.10g}")
        print(f"H_Y_bits={h_y / log(2):.10g}")
    print(f"n_star={n_star(prior, channel)}")
    return EXIT_OK


def _cmd_curves(args) -> int:
    grid = default_grid(args.grid_points)
    if args.model == "bgt":
        curves = bgt_curves(args.q, grid)
    else:
        expansion = hermite_coeffs(_build_region(args), args.order)
        curves = sbg_curves(expansion, grid)
    _write_text(curves.to_csv(), args.out)
    return EXIT_OK


def _cmd_check(args) -> int:
    grid = default_grid(args.grid_points)
    pieces = []
    if args.model == "bgt":
        curves = bgt_curves(args.q, grid)
        p = 1.0 - args.q
        witnesses = bgt_witnesses(args.q)
        note = "" if witnesses.supported_regime else PROVEN_REGIME_NOTE
        report = check_condition(curves.r0, curves.r1, p, lambda t: t, grid, regime_note=note)
        pieces.append("[condition]\n" + report.to_text())
        pieces.append("[witnesses]\n" + witnesses.to_text())
    else:
        region = _build_region(args)
        expansion = hermite_coeffs(region, args.order)
        curves = sbg_curves(expansion, grid)
        report = check_condition(curves.r0, curves.r1, 0.5, lambda t: t, grid)
        pieces.append("[condition]\n" + report.to_text())
        borell = borell_bound_check(region, grid, expansion=expansion)
        pieces.append("[halfspace-extremality]\n" + borell.to_text())
    arcsine = arcsine_inequality_check()
    pieces.append("[arcsine]\n" + arcsine.to_text())

    full = "\n".join(pieces)
    if args.out:
        _write_text(full, args.out)
    summary = [f"verdict={report.verdict}", f"min_margin={report.min_margin:.3e}"]
    if report.regime_note:
        summary.append(f'regime="{report.regime_note}"')
    print(" ".join(summary))
    return EXIT_OK


def _cmd_dn(args) -> int:
    prior = KSparsePrior(args.n, args.k)
    channel = _build_channel(args, args.n, args.k)
    betas = parse_beta_grid(args.betas)
    curve = dn_curve(
        prior,
        channel,
        betas,
        trials=args.trials,
        seed=args.seed,
        mc_draws=args.mc_draws,
        budget=args.budget,
    )
    _write_text(curve.to_csv(), args.out)
    return EXIT_OK


def _cmd_sweep(args) -> int:
    values: dict = {}
    if args.config:
        values.update(_read_config_file(args.config))
    defaults = SweepConfig()

    def pick(flag_value, key, cast, fallback):
        if flag_value is not None:
            return flag_value
        if key in values:
            return cast(values[key])
        return fallback

    config = SweepConfig(
        model=pick(args.model, "model", str, defaults.model),
        n_dims=pick(args.n, "n", int, defaults.n_dims),
        k=pick(args.k, "k", int, defaults.k),
        q=pick(args.q, "q", float, defaults.q),
        region_spec=pick(args.region, "set", str, defaults.region_spec),
        betas=pick(
            parse_beta_grid(args.betas) if args.betas is not None else None,
            "betas",
            parse_beta_grid,
            defaults.betas,
        ),
        trials=pick(args.trials, "trials", int, defaults.trials),
        seed=pick(args.seed, "seed", int, defaults.seed),
        budget=pick(args.budget, "budget", int, defaults.budget),
        mc_draws=pick(args.mc_draws, "mc_draws", int, defaults.mc_draws),
        out=pick(args.out, "out", str, defaults.out),
        fmt=pick(args.format, "format", str, defaults.fmt),
        timing=args.timing or values.get("timing", "").lower() in ("1", "true", "yes"),
    )
    rows = run_sweep(config, log=sys.stderr)
    write_rows(rows, config.fmt, config.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="aonlab",
        description="Noiseless-channel recovery-transition laboratory",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_nstar = sub.add_parser("nstar", help="print prior/output entropies and n*")
    _add_model_flags(p_nstar)
    p_nstar.add_argument("--bits", action="store_true", help="also print base-2 entropies")
    p_nstar.set_defaults(func=_cmd_nstar)

    p_curves = sub.add_parser("curves", help="emit agreement curves as CSV")
    _add_model_flags(p_curves, need_dims=False)
    p_curves.add_argument("--grid-points", type=int, default=1001)
    p_curves.add_argument("--order", type=int, default=DEFAULT_HERMITE_ORDER)
    p_curves.add_argument("--out", default="")
    p_curves.set_defaults(func=_cmd_curves)

    p_check = sub.add_parser("check", help="run the condition checker")
    _add_model_flags(p_check, need_dims=False)
    p_check.add_argument("--grid-points", type=int, default=1001)
    p_check.add_argument("--order", type=int, default=DEFAULT_HERMITE_ORDER)
    p_check.add_argument("--out", default="", help="write the full report here")
    p_check.set_defaults(func=_cmd_check)

    p_dn = sub.add_parser("dn", help="emit the normalized-divergence curve as CSV")
    _add_model_flags(p_dn)
    p_dn.add_argument("--betas", default="0.2:2.0:0.2")
    p_dn.add_argument("--trials", type=int, default=200)
    p_dn.add_argument("--seed", type=int, default=0)
    p_dn.add_argument("--mc-draws", type=int, default=256)
    p_dn.add_argument("--budget", type=int, default=DEFAULT_ENUMERATION_BUDGET)
    p_dn.add_argument("--out", default="")
    p_dn.set_defaults(func=_cmd_dn)

    p_sweep = sub.add_parser("sweep", help="run a Monte Carlo sweep over beta")
    p_sweep.add_argument("--config", default="", help="flat key = value config file")
    p_sweep.add_argument("--model", choices=MODELS, default=None)
    p_sweep.add_argument("--n", type=int, default=None)
    p_sweep.add_argument("--k", type=int, default=None)
    p_sweep.add_argument("--q", type=float, default=None)
    p_sweep.add_argument("--set", dest="region", default=None)
    p_sweep.add_argument("--betas", default=None, help="start:stop:step or comma list")
    p_sweep.add_argument("--trials", type=int, default=None)
    p_sweep.add_argument("--seed", type=int, default=None)
    p_sweep.add_argument("--budget", type=int, default=None)
    p_sweep.add_argument("--mc-draws", type=int, default=None)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--format", choices=("csv", "json-lines"), default=None)
    p_sweep.add_argument("--timing", action="store_true", help="write measured wall_ms")
    p_sweep.set_defaults(func=_cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    raise SystemExit(main())
