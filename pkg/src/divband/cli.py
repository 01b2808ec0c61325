"""Command-line orchestration: solve, sweep, simulate and iterate reports.

Every command reads a flat ``key=value`` configuration file, emits CSV
files with a fixed header, 12 significant digits and newline-terminated
rows, and renders companion PNG figures next to the data (suppress with
``--no-plots``).  Exit codes: 0 success (verified where applicable),
1 usage or configuration error, 2 solver or verification failure,
3 I/O error.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import band, hjb
from .errors import DivbandError, MissingKey, NegativeBeta, NonPositiveRate, ParseError, PhiBelowOne
from .policy_iter import ClaimDistribution, iterate
from .risk_model import ModelParams, char_roots, validate_params
from .simulate import SimConfig, StrategySpec, estimate_value

CONFIG_KEYS = ("c", "lambda", "alpha", "beta", "delta", "phi",
               "tol_root", "tol_residual")
SIM_KEYS = ("x0", "n_paths", "horizon", "seed")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_SOLVER = 2
EXIT_IO = 3


def parse_config(path) -> tuple[ModelParams, dict]:
    """Read a flat key=value file ('#' comments) into validated parameters.

    Returns the model parameters and a dict of optional simulation
    defaults (x0, n_paths, horizon, seed).  Unknown keys are rejected.
    """
    model_raw: dict[str, float] = {}
    sim_raw: dict[str, float] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ParseError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, value = line.partition("=")
            key, value = key.strip(), value.strip()
            try:
                num = float(value)
            except ValueError:
                raise ParseError(f"{path}:{lineno}: non-numeric value {value!r}") from None
            if key in CONFIG_KEYS:
                if key in model_raw:
                    raise ParseError(f"{path}:{lineno}: duplicate key {key!r}")
                model_raw[key] = num
            elif key in SIM_KEYS:
                if key in sim_raw:
                    raise ParseError(f"{path}:{lineno}: duplicate key {key!r}")
                sim_raw[key] = num
            else:
                raise ParseError(f"{path}:{lineno}: unknown key {key!r}")
    return validate_params(model_raw), sim_raw


def _fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return f"{float(value):.12g}"


def write_csv(path: Path, header: list[str], rows) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _solution_row(sol: band.BandSolution) -> list:
    roots = char_roots(sol.params)
    coef = sol.coeffs
    if coef is None:
        a1 = a2 = a3 = a4 = b1 = b2 = math.nan
    else:
        a1, a2, a3, a4 = coef.A1, coef.A2, coef.A3, coef.A4
        b1, b2 = coef.B1, coef.B2
    return [sol.regime.kind.value, sol.a_star, sol.b_star, sol.b_tilde, sol.phi_max,
            roots.S1, roots.S2, roots.R1, roots.R2, a1, a2, a3, a4, b1, b2]


SOLUTION_HEADER = ["regime", "a_star", "b_star", "b_tilde", "phi_max",
                   "S1", "S2", "R1", "R2", "A1", "A2", "A3", "A4", "B1", "B2"]
TABLE_HEADER = ["x", "V", "dV", "d2V", "hjb_part1", "hjb_part2"]
SWEEP_HEADER = ["phi", "regime", "a_star", "b_star"]
SIM_HEADER = ["strategy_a", "strategy_b", "x0", "n_paths", "horizon", "seed",
              "mean", "stderr", "mean_dividends", "mean_funding",
              "ruin_fraction", "mean_ruin_time", "bias_bound", "closed_form_V"]
ITER_HEADER = ["n", "best_b", "V_at_0", "V_at_a_star", "V_at_b_star"]


def cmd_solve(params: ModelParams, out: Path, plots: bool) -> int:
    sol = band.solve(params)
    pv = band.piecewise_value(sol)
    table = hjb.verification_table(pv, params, n=1001)
    report = hjb.hypothesis_report(pv, params)

    write_csv(out / "solution.csv", SOLUTION_HEADER, [_solution_row(sol)])
    write_csv(out / "value_table.csv", TABLE_HEADER,
              zip(table["x"], table["V"], table["dV"], table["d2V"],
                  table["hjb_part1"], table["hjb_part2"]))
    if plots:
        from . import plots as figs
        figs.plot_solution(table, sol, str(out / "solve_value_function.png"))

    print(f"regime={sol.regime.kind.value} a_star={sol.a_star:.6f} "
          f"b_star={sol.b_star:.6f} verified={report.passed}")
    if not report.passed:
        for check in report.checks:
            if not check.passed:
                print(f"verification failure: {check.name} = {check.value:.3e} "
                      f"(threshold {check.threshold:g})", file=sys.stderr)
        return EXIT_SOLVER
    return EXIT_OK


def cmd_sweep(params: ModelParams, phi_min: float, phi_max_arg: float,
              n_points: int, out: Path, plots: bool) -> int:
    if not (1.0 <= phi_min < phi_max_arg):
        print("sweep requires 1 <= phi-min < phi-max", file=sys.stderr)
        return EXIT_USAGE
    phis = np.linspace(phi_min, phi_max_arg, n_points)
    rows, failed = [], 0
    a_list, b_list = [], []
    sol0 = None
    for phi in phis:
        p = ModelParams(c=params.c, lam=params.lam, alpha=params.alpha,
                        beta=params.beta, delta=params.delta, phi=float(phi),
                        tol_root=params.tol_root, tol_residual=params.tol_residual)
        try:
            sol = band.solve(p)
        except DivbandError as exc:
            print(f"phi={phi:.6g}: {exc}", file=sys.stderr)
            rows.append([phi, "error", math.nan, math.nan])
            a_list.append(math.nan)
            b_list.append(math.nan)
            failed += 1
            continue
        sol0 = sol0 or sol
        rows.append([phi, sol.regime.kind.value, sol.a_star, sol.b_star])
        a_list.append(sol.a_star)
        b_list.append(sol.b_star)
    write_csv(out / "sweep.csv", SWEEP_HEADER, rows)
    if plots and sol0 is not None:
        from . import plots as figs
        figs.plot_sweep(phis, a_list, b_list, sol0.phi_max, sol0.b_tilde,
                        str(out / "sweep_strategies.png"))
    print(f"sweep wrote {len(rows)} rows ({failed} failed)")
    return EXIT_SOLVER if failed else EXIT_OK


def cmd_simulate(params: ModelParams, strategy: StrategySpec, config: SimConfig,
                 out: Path, plots: bool) -> int:
    est = estimate_value(strategy, config, params)
    closed_form = math.nan
    try:
        sol = band.solve(params)
        if (abs(strategy.a - sol.a_star) <= 1e-9
                and abs(strategy.b - sol.b_star) <= 1e-9):
            closed_form = float(band.eval(sol, config.x0))
    except DivbandError:
        pass
    row = [strategy.a, strategy.b, config.x0, config.n_paths, config.horizon,
           config.seed, est.mean, est.stderr, est.mean_dividends, est.mean_funding,
           est.ruin_fraction, est.mean_ruin_time, est.bias_bound, closed_form]
    write_csv(out / "simulate.csv", SIM_HEADER, [row])
    if plots:
        from . import plots as figs
        figs.plot_simulate(est, closed_form, str(out / "simulate_estimate.png"))
    print(f"mean={est.mean:.6f} stderr={est.stderr:.6f} "
          f"ruin_fraction={est.ruin_fraction:.4f}")
    return EXIT_OK


def cmd_iterate(params: ModelParams, n: int, grid_step: float,
                out: Path, plots: bool) -> int:
    dist = ClaimDistribution.exponential(params.alpha)
    sols = iterate(dist, params, n, grid_step)
    try:
        closed = band.solve(params)
        pv = band.piecewise_value(closed)
        a_star, b_star = closed.a_star, closed.b_star
        ceiling = (float(pv.value(0.0)), float(pv.value(a_star)), float(pv.value(b_star)))
    except DivbandError:
        a_star = b_star = math.nan
        ceiling = None

    rows = []
    for k, g in enumerate(sols):
        va = g(a_star) if math.isfinite(a_star) else math.nan
        vb = g(b_star) if math.isfinite(b_star) else math.nan
        rows.append([k, g.b, float(g(0.0)), float(va), float(vb)])
    if ceiling is not None:
        rows.append(["closed_form", b_star, ceiling[0], ceiling[1], ceiling[2]])
    write_csv(out / "iterate.csv", ITER_HEADER, rows)
    if plots:
        from . import plots as figs
        figs.plot_iterate(list(range(len(sols))), [g.b for g in sols],
                          [float(g(0.0)) for g in sols],
                          ceiling[0] if ceiling else math.nan,
                          str(out / "iterate_convergence.png"))
    print(f"iterate wrote {len(rows)} rows")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="divband",
        description="Optimal dividend and random-funding band strategies.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(sp):
        sp.add_argument("--config", required=True, help="key=value parameter file")
        sp.add_argument("--out", default=".", help="output directory (default: .)")
        sp.add_argument("--no-plots", action="store_true",
                        help="skip PNG figure rendering")

    sp = sub.add_parser("solve", help="optimal levels, value table, verification")
    add_common(sp)

    sp = sub.add_parser("sweep", help="optimal levels over a funding-cost grid")
    add_common(sp)
    sp.add_argument("--phi-min", type=float, required=True)
    sp.add_argument("--phi-max", type=float, required=True, dest="phi_max")
    sp.add_argument("--points", type=int, required=True)

    sp = sub.add_parser("simulate", help="Monte Carlo estimate of a band strategy")
    add_common(sp)
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--x0", type=float, default=None)
    sp.add_argument("--paths", type=int, default=None)
    sp.add_argument("--horizon", type=float, default=None)
    sp.add_argument("--seed", type=int, default=None)

    sp = sub.add_parser("iterate", help="capped-funding value iteration")
    add_common(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--grid-step", type=float, default=0.02, dest="grid_step")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE

    try:
        params, sim_defaults = parse_config(args.config)
    except FileNotFoundError:
        print(f"config file not found: {args.config}", file=sys.stderr)
        return EXIT_IO
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ParseError, MissingKey, NonPositiveRate, NegativeBeta, PhiBelowOne,
            ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        print(f"cannot create output directory: {exc}", file=sys.stderr)
        return EXIT_IO

    plots = not args.no_plots
    try:
        if args.command == "solve":
            return cmd_solve(params, out, plots)
        if args.command == "sweep":
            return cmd_sweep(params, args.phi_min, args.phi_max, args.points,
                             out, plots)
        if args.command == "simulate":
            def pick(flag, key, fallback=None):
                if flag is not None:
                    return flag
                if key in sim_defaults:
                    return sim_defaults[key]
                return fallback
            a = pick(args.a, "a")
            b = pick(args.b, "b")
            if a is None or b is None:
                print("simulate requires --a and --b", file=sys.stderr)
                return EXIT_USAGE
            try:
                strategy = StrategySpec(a=float(a), b=float(b))
                config = SimConfig(
                    x0=float(pick(args.x0, "x0", 0.0)),
                    n_paths=int(pick(args.paths, "n_paths", 10_000)),
                    horizon=float(pick(args.horizon, "horizon", 400.0)),
                    seed=int(pick(args.seed, "seed", 0)),
                )
            except DivbandError as exc:
                print(f"invalid simulation input: {exc}", file=sys.stderr)
                return EXIT_USAGE
            return cmd_simulate(params, strategy, config, out, plots)
        if args.command == "iterate":
            if args.n < 0 or args.grid_step <= 0.0:
                print("iterate requires --n >= 0 and --grid-step > 0", file=sys.stderr)
                return EXIT_USAGE
            return cmd_iterate(params, args.n, args.grid_step, out, plots)
        raise AssertionError(f"unhandled command {args.command}")
    except DivbandError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
