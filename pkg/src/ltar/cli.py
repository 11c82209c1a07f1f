"""``ltar`` command line: generate, fit, forecast, eval and bench.

Exit status is 0 on success, 1 for usage or validation errors, 2 for
unreadable or inconsistent data and 3 for numerical failures.  Every
diagnostic is a single line on stderr.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from ltar.datagen import GraphGenConfig, gen_graph_series, gen_ltar1_series
from ltar.differencing import DifferenceOrder
from ltar.errors import (
    FormatError,
    ImaginaryResidueError,
    InsufficientDataError,
    ShapeError,
    SingularSystemError,
)
from ltar.evaluation import (
    available_workers,
    bench_csv,
    bench_fit,
    errors_csv,
    eval_csv,
    evaluate,
    loglog_slope,
    scaling_csv,
    scaling_probe,
)
from ltar.io import format_series, load_model, model_to_json, read_series
from ltar.model import ForecastMode, fit_with_differencing, forecast
from ltar.transforms import TransformKind

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _positive(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _nonnegative(text):
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {value}")
    return value


def _workers(text):
    return available_workers() if text == "max" else _positive(text)


def _int_list(text):
    try:
        values = [int(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values or min(values) < 1:
        raise argparse.ArgumentTypeError("lengths must be a non-empty list of positive integers")
    return values


def _choice(parse):
    def convert(text):
        try:
            return parse(text)
        except ValueError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None

    return convert


def _emit(text: str, out) -> None:
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_bytes(text.encode("utf-8"))


def _add_fit_options(sp):
    sp.add_argument("--p", type=_positive, required=True, help="autoregressive lag order")
    sp.add_argument("--d", type=_nonnegative, default=0, help="lag differencing order")
    sp.add_argument("--s", type=_nonnegative, default=0, help="seasonal period (0 disables)")
    sp.add_argument("--transform", type=_choice(TransformKind.parse), default=TransformKind.DCT)
    sp.add_argument("--difference-order", type=_choice(DifferenceOrder.parse), default=DifferenceOrder.SEASONAL_THEN_LAG)
    sp.add_argument("--workers", type=_workers, default=1, help="worker processes, or 'max'")
    sp.add_argument("--no-ridge", action="store_true", help="fail on singular normal equations instead of regularising")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ltar", description="Tensor autoregression under invertible transforms.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    gen = sub.add_parser("generate", help="write a synthetic series file")
    gen_sub = gen.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    g1 = gen_sub.add_parser("ltar1", help="3x3x3 L-TAR(1) process with uniform noise")
    g1.add_argument("--n", type=_positive, default=2000)
    g1.add_argument("--seed", type=int, default=0)
    g1.add_argument("--transform", type=_choice(TransformKind.parse), default=TransformKind.DCT)
    g1.add_argument("--out", "-o")
    gg = gen_sub.add_parser("graph", help="adjacency matrices of a drifting two-community graph")
    gg.add_argument("--nodes", type=_positive, default=20)
    gg.add_argument("--n", type=_positive, default=2000)
    gg.add_argument("--seed", type=int, default=0)
    gg.add_argument("--sigma", type=float, default=0.02)
    gg.add_argument("--edge-period", type=float, default=50.0)
    gg.add_argument("--community-period", type=float, default=200.0)
    gg.add_argument("--out", "-o")

    fit = sub.add_parser("fit", help="fit a model to a series file")
    fit.add_argument("series")
    _add_fit_options(fit)
    fit.add_argument("--out", "-o")

    fc = sub.add_parser("forecast", help="forecast from a fitted model")
    fc.add_argument("model")
    fc.add_argument("--history", help="series to continue (default: the tail stored in the model)")
    fc.add_argument("--steps", type=_positive, required=True)
    fc.add_argument("--mode", type=_choice(ForecastMode.parse), default=ForecastMode.MULTI_STEP)
    fc.add_argument("--truth", help="true continuation; enables the error CSV")
    fc.add_argument("--errors-out", help="where to write the step,error CSV")
    fc.add_argument("--out", "-o")

    ev = sub.add_parser("eval", help="per-step forecast errors of a model on a test series")
    ev.add_argument("model")
    ev.add_argument("--history", help="training series preceding the test series")
    ev.add_argument("--test", required=True)
    ev.add_argument("--mode", type=_choice(ForecastMode.parse), default=ForecastMode.MULTI_STEP)
    ev.add_argument("--out", "-o")

    bench = sub.add_parser("bench", help="timing benchmarks")
    bench_sub = bench.add_subparsers(dest="kind", required=True, parser_class=_Parser)
    bs = bench_sub.add_parser("speedup", help="sequential versus parallel fit time on a graph series")
    bs.add_argument("--nodes", type=_positive, default=32)
    bs.add_argument("--n", type=_positive, default=2000)
    bs.add_argument("--p", type=_positive, default=10)
    bs.add_argument("--seed", type=int, default=0)
    bs.add_argument("--transform", type=_choice(TransformKind.parse), default=TransformKind.DCT)
    bs.add_argument("--workers", type=_workers, default="max")
    bs.add_argument("--trials", type=_positive, default=20)
    bs.add_argument("--out", "-o")
    bc = bench_sub.add_parser("scaling", help="fit time against series length")
    bc.add_argument("--n", type=_int_list, default=[250, 500, 1000, 2000], help="comma-separated lengths")
    bc.add_argument("--ell", type=_positive, default=10)
    bc.add_argument("--m", type=_positive, default=10)
    bc.add_argument("--p", type=_positive, default=5)
    bc.add_argument("--seed", type=int, default=0)
    bc.add_argument("--transform", type=_choice(TransformKind.parse), default=TransformKind.DCT)
    bc.add_argument("--trials", type=_positive, default=5)
    bc.add_argument("--out", "-o")
    return parser


def _generate(args):
    if args.kind == "ltar1":
        series = gen_ltar1_series(args.n, seed=args.seed, transform=args.transform)
    else:
        cfg = GraphGenConfig(
            nodes=args.nodes,
            edge_period=args.edge_period,
            community_period=args.community_period,
            sigma=args.sigma,
            seed=args.seed,
            n=args.n,
        )
        series = gen_graph_series(cfg)
    _emit(format_series(series), args.out)


def _fit(args):
    series = read_series(args.series)
    model = fit_with_differencing(
        series,
        args.p,
        d=args.d,
        s=args.s,
        transform=args.transform,
        difference_order=args.difference_order,
        workers=args.workers,
        ridge_fallback=not args.no_ridge,
    )
    _emit(model_to_json(model), args.out)


def _forecast(args):
    model = load_model(args.model)
    history = read_series(args.history) if args.history else None
    truth = read_series(args.truth) if args.truth else None
    if args.errors_out and truth is None:
        raise UsageError("ltar forecast: --errors-out needs --truth")
    result = forecast(model, history, args.steps, args.mode, truth=truth)
    _emit(format_series(result.predictions), args.out)
    if result.errors is not None and args.errors_out:
        _emit(errors_csv(result.errors), args.errors_out)


def _eval(args):
    model = load_model(args.model)
    history = read_series(args.history) if args.history else None
    test = read_series(args.test)
    report = evaluate(model, history, test, args.mode)
    _emit(eval_csv(report), args.out)
    s = report.summary()
    print(f"{s['mode']} horizon={s['horizon']} mean={s['mean']:.6g} max={s['max']:.6g} final={s['final']:.6g}", file=sys.stderr)


def _bench(args):
    if args.kind == "speedup":
        series = gen_graph_series(GraphGenConfig(nodes=args.nodes, n=args.n, seed=args.seed))
        report = bench_fit(series, args.p, args.transform, workers=args.workers, trials=args.trials)
        _emit(bench_csv(report), args.out)
        print(
            f"workers={report.workers} speedup={report.speedup:.3f} median_speedup={report.median_speedup:.3f} "
            f"identical={report.identical}",
            file=sys.stderr,
        )
    else:
        table = scaling_probe(args.n, trials=args.trials, ell=args.ell, m=args.m, p=args.p, transform=args.transform, seed=args.seed)
        _emit(scaling_csv(table), args.out)
        print(f"log-log slope={loglog_slope(table):.3f}", file=sys.stderr)


_COMMANDS = {"generate": _generate, "fit": _fit, "forecast": _forecast, "eval": _eval, "bench": _bench}


def _fail(message, code):
    print(f"error: {message}".replace("\n", " "), file=sys.stderr)
    return code


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        _COMMANDS[args.command](args)
    except UsageError as exc:
        return _fail(exc, EXIT_USAGE)
    except (SingularSystemError, ImaginaryResidueError) as exc:
        return _fail(exc, EXIT_NUMERIC)
    except (FormatError, ShapeError, InsufficientDataError) as exc:
        return _fail(exc, EXIT_DATA)
    except OSError as exc:
        return _fail(f"{exc.filename or ''}: {exc.strerror or exc}", EXIT_DATA)
    except ValueError as exc:
        return _fail(exc, EXIT_USAGE)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
