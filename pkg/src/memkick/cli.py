"""Command-line entry point ``memkick``.

Exit codes: 0 success, 1 invalid input (the message names the key and the
constraint it violates), 2 numeric failure (escape where a bounded orbit is
required, Mittag-Leffler series failure, failed verification).
"""

from __future__ import annotations

import argparse
import csv
import io
import sys
from typing import Sequence

from .analysis import DivergenceError, ScanConfig, bifurcation_scan, detect_period, divergence_exponent
from .analytic import natural_growth, sample_natural_growth
from .config import KEYS, RunConfig, resolve
from .econ import FractionalOrder, ParameterError
from .maps import GeneralizedGrowth, make_engine
from .special import MittagLefflerError, MittagLefflerRangeError, MlParams, kernel_table, mittag_leffler

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def _flag(key: str) -> str:
    return "--" + key.replace("_", "-")


def _add_model_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value file (overrides $MEMKICK_CONFIG)")
    grp = p.add_argument_group("model parameters (override config files)")
    for key, (_, default, text) in KEYS.items():
        shown = "" if default is None else f" [default: {default}]"
        grp.add_argument(_flag(key), dest=key, metavar="V", help=text + shown)


def _run_config(args) -> RunConfig:
    flags = {key: getattr(args, key) for key in KEYS}
    return resolve(flags, args.config)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# --- subcommands ------------------------------------------------------------------------


def cmd_simulate(args) -> int:
    cfg = _run_config(args)
    spec = cfg.spec()
    init = cfg.initial_state(spec)
    tr = make_engine(spec, init, cfg["n_steps"], cfg["engine"], cfg["seed_step"]).run()

    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    width = tr.states.shape[1]
    if isinstance(spec, GeneralizedGrowth):
        header = ["n", "R"] + [f"R_d{s}" for s in range(1, width)] + ["Y"]
    else:
        header = ["n", "Y"] + [f"Y_d{s}" for s in range(1, width)]
    w.writerow(header)
    for n, row in enumerate(tr.states):
        cells = [str(n)] + [_fmt(v) for v in row]
        if isinstance(spec, GeneralizedGrowth):
            cells.append(_fmt(tr.y[n]))
        w.writerow(cells)
    if tr.escaped:
        w.writerow(["escaped", str(tr.escaped_at)])
        print(f"memkick: trajectory left the valid region at step {tr.escaped_at} ({tr.reason})", file=sys.stderr)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_bifurcate(args) -> int:
    cfg = _run_config(args)
    if args.param == "lambda" and not cfg.explicit("map"):
        cfg = cfg.with_map("logistic")
    spec = cfg.spec()
    scan = ScanConfig(args.param, args.lo, args.hi, args.grid, args.transient, args.sample, tuple(cfg.initial_state(spec)))
    if args.workers < 1:
        raise ParameterError("workers", "workers >= 1", args.workers)
    data = bifurcation_scan(scan, spec, workers=args.workers, engine=cfg["engine"])
    _emit(data.to_csv(), args.out)
    return EXIT_OK


def cmd_lyapunov(args) -> int:
    cfg = _run_config(args)
    spec = cfg.spec()
    try:
        value = divergence_exponent(
            spec,
            cfg.initial_state(spec),
            cfg["n_steps"],
            delta0=args.delta0,
            renorm_every=args.renorm_every,
            n_transient=args.transient,
            engine=cfg["engine"],
        )
    except DivergenceError as exc:
        raise NumericFailure(str(exc)) from None
    print(_fmt(value))
    return EXIT_OK


def cmd_period(args) -> int:
    cfg = _run_config(args)
    spec = cfg.spec()
    n = cfg["n_steps"]
    if not 2 <= args.sample <= n + 1:
        raise ParameterError("sample", f"2 <= sample <= n_steps + 1 = {n + 1}", args.sample)
    tr = make_engine(spec, cfg.initial_state(spec), n, cfg["engine"], cfg["seed_step"]).run()
    if tr.escaped:
        raise NumericFailure(f"orbit left the valid region at step {tr.escaped_at} ({tr.reason})")
    p = detect_period(tr.y[-args.sample :], args.tol)
    print("aperiodic" if p is None else p)
    return EXIT_OK


def cmd_mlf(args) -> int:
    params = MlParams(args.alpha, args.beta, args.tol, args.max_terms)
    print(_fmt(mittag_leffler(params, args.z)))
    return EXIT_OK


def cmd_kernel(args) -> int:
    if not args.alpha > 0:
        raise ParameterError("alpha", "alpha > 0", args.alpha)
    if args.nmax < 1:
        raise ParameterError("nmax", "nmax >= 1", args.nmax)
    table = kernel_table(args.alpha, args.nmax)
    buf = io.StringIO()
    buf.write("z,value\n")
    for z in range(1, table.n_max + 1):
        buf.write(f"{z},{_fmt(table[z])}\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_solve_growth(args) -> int:
    n = FractionalOrder(args.alpha).bracket_n
    if args.y0_d1 is not None and n < 2:
        raise ParameterError("y0_d1", "only meaningful for alpha > 1", args.y0_d1)
    derivs = [args.y0] + ([args.y0_d1 or 0.0] if n >= 2 else []) + [0.0] * max(0, n - 2)
    if args.sample is None:
        if args.t is None:
            raise ParameterError("t", "given (or use --sample with --t-max)", None)
        print(_fmt(natural_growth(args.alpha, args.rate, derivs, args.t)))
        return EXIT_OK
    if args.t_max is None or not args.t_max > 0:
        raise ParameterError("t_max", "t_max > 0 together with --sample", args.t_max)
    ts, ys = sample_natural_growth(args.alpha, args.rate, derivs, args.t_max, args.sample)
    buf = io.StringIO()
    buf.write("t,Y\n")
    for t, y in zip(ts, ys):
        buf.write(f"{_fmt(t)},{_fmt(y)}\n")
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import format_table, run_all

    selected = None
    if args.only:
        try:
            selected = {int(tok) for tok in args.only.split(",")}
        except ValueError:
            raise ParameterError("only", "comma-separated criterion numbers", args.only) from None
    results = run_all(selected)
    print(format_table(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERIC


# --- parser ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="memkick", description=__doc__.splitlines()[0], allow_abbrev=False)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("simulate", help="iterate a map and write its trajectory as CSV", allow_abbrev=False)
    _add_model_flags(p)
    p.add_argument("--out", help="CSV destination (default: stdout)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("bifurcate", help="sweep one parameter and record long-run values", allow_abbrev=False)
    _add_model_flags(p)
    p.add_argument("--param", required=True, help="parameter to sweep, e.g. lambda, alpha, b")
    p.add_argument("--from", dest="lo", type=float, required=True)
    p.add_argument("--to", dest="hi", type=float, required=True)
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--transient", type=int, default=1000)
    p.add_argument("--sample", type=int, default=64)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--out")
    p.set_defaults(func=cmd_bifurcate)

    p = sub.add_parser("lyapunov", help="two-trajectory divergence exponent", allow_abbrev=False)
    _add_model_flags(p)
    p.add_argument("--delta0", type=float, default=1e-8)
    p.add_argument("--renorm-every", type=int, default=1)
    p.add_argument("--transient", type=int, default=0)
    p.set_defaults(func=cmd_lyapunov)

    p = sub.add_parser("period", help="period of the orbit tail (or 'aperiodic')", allow_abbrev=False)
    _add_model_flags(p)
    p.add_argument("--sample", type=int, default=128, help="tail length inspected")
    p.add_argument("--tol", type=float, default=1e-8)
    p.set_defaults(func=cmd_period)

    p = sub.add_parser("mlf", help="two-parameter Mittag-Leffler function", allow_abbrev=False)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--z", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-14)
    p.add_argument("--max-terms", type=int, default=2000)
    p.set_defaults(func=cmd_mlf)

    p = sub.add_parser("kernel", help="memory kernel table as CSV", allow_abbrev=False)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_kernel)

    p = sub.add_parser("solve-growth", help="closed-form natural growth with memory", allow_abbrev=False)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--rate", type=float, required=True, help="m*P/v")
    p.add_argument("--t", type=float)
    p.add_argument("--y0", type=float, required=True)
    p.add_argument("--y0-d1", type=float)
    p.add_argument("--sample", type=int, help="number of points on [0, t_max]")
    p.add_argument("--t-max", type=float)
    p.add_argument("--out")
    p.set_defaults(func=cmd_solve_growth)

    p = sub.add_parser("verify", help="run the acceptance checks", allow_abbrev=False)
    p.add_argument("--only", help="comma-separated criterion numbers")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_INVALID
    except (NumericFailure, MittagLefflerError, MittagLefflerRangeError, ArithmeticError) as exc:
        print(f"memkick: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ValueError, TypeError, OSError) as exc:
        print(f"memkick: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
