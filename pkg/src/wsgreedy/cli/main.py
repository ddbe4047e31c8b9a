"""Command-line entry point: ``wsgreedy <subcommand> [options]``."""

from __future__ import annotations

import argparse
import logging
import math
import sys

import numpy as np

from ..algorithms import (
    BoundInputs,
    MrgConfig,
    drg_cost_ratio_bound,
    estimate_wsc,
    eta_diagnostic,
    mrg_approximation_bound,
    wssa_relaxation_alpha,
)
from ..core import CostModel
from ..objectives import ModularObjective, SquaredModularObjective, WeightedCoverageObjective, truncate
from .config import ScenarioConfig
from .experiments import RUNNERS
from .report import emit_report, write_csv

log = logging.getLogger("wsgreedy")


def random_coverage(n: int, n_items: int, rng: np.random.Generator, density: float = 0.35):
    covers = rng.random((n, n_items)) < density
    return WeightedCoverageObjective(covers, rng.uniform(0.5, 2.0, n_items))


def toy_coverage() -> tuple:
    """Three elements over items {a, b, c}: {a,b} c=1, {c} c=1, {a,b,c} c=2."""
    return WeightedCoverageObjective([[0, 1], [2], [0, 1, 2]], n_items=3), CostModel([1.0, 1.0, 2.0])


def _run(args, experiment: str) -> int:
    cfg = ScenarioConfig.load(experiment, args.config, args.seed)
    log.info("running experiment %s (seed %d, horizon %d)", experiment, cfg.seed, cfg.horizon)
    report = RUNNERS[experiment](cfg)
    paths = emit_report(report, args.out, args.format, plots=not args.no_plots)
    for row in report.summary():
        print(",".join(str(row[k]) for k in row))
    log.info("wrote %d files to %s", len(paths), args.out)
    return 0


def _wsc(args) -> int:
    rng = np.random.default_rng(args.seed)
    if args.objective == "coverage":
        f = random_coverage(args.n, args.items, rng)
    elif args.objective == "modular":
        f = ModularObjective(rng.uniform(0.5, 2.0, args.n))
    else:
        f = SquaredModularObjective(rng.uniform(0.5, 2.0, args.n))
    if args.truncate is not None:
        f = truncate(f, args.truncate)
    w = estimate_wsc(f)
    print(f"wsc={'unbounded' if math.isinf(w) else repr(w)}")
    return 0


def _bound(args) -> int:
    inputs = BoundInputs(
        mu=args.mu, w_f=args.wf, delta=args.delta, U=args.U, c_max=args.cmax, budget=args.B,
        L=args.L, M=args.M, m=args.m, opt_cost=args.opt_cost, sq_cost=args.sq_cost,
    )  # fmt: skip
    try:
        if args.kind == "mrg":
            print(f"ratio_lower_bound={mrg_approximation_bound(inputs)!r}")
        elif args.kind == "drg":
            print(f"cost_ratio_upper_bound={drg_cost_ratio_bound(inputs)!r}")
        else:
            alpha, prob = wssa_relaxation_alpha(inputs, args.P)
            print(f"alpha={alpha!r}")
            print(f"success_probability={prob!r}")
    except ValueError as exc:
        print(f"undefined ({exc})")
        return 2
    return 0


def _eta(args) -> int:
    if args.n:
        rng = np.random.default_rng(args.seed)
        f = random_coverage(args.n, 2 * args.n, rng)
        costs = CostModel(rng.uniform(1.0, 2.0, args.n))
    else:
        f, costs = toy_coverage()
    config = MrgConfig(budget=args.budget, r=args.r, seed=args.seed)
    diag = eta_diagnostic(f, costs, config, seeds=range(args.seed, args.seed + args.runs))
    etas = diag.etas
    print(f"runs={args.runs} samples={etas.size}")
    print(f"eta_min={float(etas.min())!r} eta_max={float(etas.max())!r}")
    print(f"eta_mean={diag.mean!r} eta_se={diag.stderr!r} mu_estimate={diag.mu_estimate!r}")
    print(f"increment_mean={diag.increment_mean!r} increment_se={diag.increment_stderr!r}")
    print(f"drift_within_3se={diag.drift_ok()}")
    if args.out:
        from pathlib import Path

        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        rows = [{"run": i, "iteration": k, "eta": e} for i, run in enumerate(diag.runs) for k, e in enumerate(run)]
        write_csv(out / "eta.csv", ["run", "iteration", "eta"], rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wsgreedy", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, exp, helptext in (
        ("run-a", "A", "budgeted MSE selection with MRG"),
        ("run-b", "B", "threshold coverage with DRG"),
        ("run-c", "C", "robust max-min with Random-WSSA"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", help="YAML scenario file (defaults to the full-scale scenario)")
        p.add_argument("--seed", type=int, help="scenario seed override")
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--format", default="csv", choices=["csv"])
        p.add_argument("--no-plots", action="store_true", help="skip PNG rendering")
        p.set_defaults(func=lambda a, exp=exp: _run(a, exp))

    p = sub.add_parser("wsc-estimate", help="exact weak-submodularity constant of a random instance")
    p.add_argument("--objective", choices=["coverage", "modular", "squared"], default="coverage")
    p.add_argument("--n", type=int, default=8)
    p.add_argument("--items", type=int, default=12)
    p.add_argument("--truncate", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_wsc)

    p = sub.add_parser("bound-eval", help="evaluate an approximation guarantee")
    p.add_argument("--kind", choices=["mrg", "drg", "wssa"], required=True)
    p.add_argument("--mu", type=float, default=1.0)
    p.add_argument("--wf", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=1.0)
    p.add_argument("--U", type=int)
    p.add_argument("--cmax", type=float)
    p.add_argument("--B", type=float)
    p.add_argument("--L", type=int, default=1)
    p.add_argument("--M", type=float)
    p.add_argument("--m", type=float)
    p.add_argument("--opt-cost", type=float, default=1.0)
    p.add_argument("--sq-cost", type=float, default=0.0)
    p.add_argument("--P", type=int, default=0)
    p.set_defaults(func=_bound)

    p = sub.add_parser("eta-diag", help="sampled vs. full greedy ratio diagnostic")
    p.add_argument("--n", type=int, default=0, help="random coverage instance size (0 = built-in toy)")
    p.add_argument("--budget", type=float, default=2.0)
    p.add_argument("--r", type=int, default=2)
    p.add_argument("--runs", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=_eta)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO, format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
