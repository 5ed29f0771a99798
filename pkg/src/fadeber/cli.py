"""
Command-line interface for fadeber.

Subcommands::

    fadeber fit --scheme qpsk --grid 0:10:0.1 [--domain db|linear] [--json]
    fadeber fit --data curve.csv [--domain db|linear]
    fadeber awgn --scheme 16qam --grid 0:20:1 [--fit a,b,c] [--out FILE]
    fadeber fading --scheme bfsk --grid 0:50:1 [--mode closed-form|exact|quadrature]
    fadeber mc --scheme qpsk --ebn0-db 10 --samples 1000000 --seed 42 [--bit-level]
    fadeber reproduce --table 1|2
    fadeber reproduce --figure 1|2|3|4 [--grid 0:50:1] [--seed S]

Tables go to stdout as CSV unless ``--out`` is given; logs go to stderr.

Exit codes: 0 success, 2 invalid arguments or settings, 3 numerical non-convergence.
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from . import __version__
from .core.fading import (
    ComparisonRow, compare_curves, evaluate_mode, generalized_fading_curve,
)
from .core.gaussfit import FitOptions, GaussianFit, fit_gaussian, goodness_of_fit
from .core.modulation import (
    BerCurve, ModulationScheme, awgn_ber_linear, ber_curve, load_ber_curve, snr_grid,
)
from .core.montecarlo import McConfig, McMode, estimate_fading_ber
from .core.numerics import SnrDomain, SnrValue
from .core.published import (
    FIGURE_SCHEMES, PUBLISHED_FITS, PUBLISHED_METRICS, figure_scheme, published_fit,
)
from .exceptions import ConfigurationError, ConvergenceError, InvalidParameterError
from .logging import configure_logging_from_env, log_system_info
from .services.report_output import format_value, open_target
from .settings import Settings, load_settings

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NOT_CONVERGED = 3

COMPARISON_HEADER = ["ebn0_db", "ber_generalized", "ber_exact", "ber_quadrature", "ratio"]
MODE_COLUMNS = {
    "closed-form": "ber_generalized",
    "exact": "ber_exact",
    "quadrature": "ber_quadrature",
}
METRIC_NAMES = ("sse", "r2", "adj_r2", "rmse")

Grid = Tuple[float, float, float]
Handler = Callable[[argparse.Namespace, Settings], int]


def parse_grid(text: str) -> Grid:
    """
    Parse ``start:stop:step``.

    Raises:
        InvalidParameterError: If the text is not three numbers separated by colons
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise InvalidParameterError(f"Grid must look like start:stop:step, got {text!r}")
    try:
        start, stop, step = (float(p) for p in parts)
    except ValueError:
        raise InvalidParameterError(f"Grid values must be numbers, got {text!r}")
    return start, stop, step


def parse_fit(text: str, domain: SnrDomain = SnrDomain.DECIBEL) -> GaussianFit:
    """Parse Gaussian constants given as ``a,b,c``."""
    parts = text.split(",")
    if len(parts) != 3:
        raise InvalidParameterError(f"Gaussian constants must look like a,b,c, got {text!r}")
    try:
        a, b, c = (float(p) for p in parts)
    except ValueError:
        raise InvalidParameterError(f"Gaussian constants must be numbers, got {text!r}")
    return GaussianFit(a=a, b=b, c=c, domain=domain)


def resolve_seed(explicit: Optional[int], default: int) -> int:
    """Seed from the flag, else FADEBER_SEED, else the settings default."""
    if explicit is not None:
        return explicit
    env_seed = os.getenv("FADEBER_SEED")
    if env_seed is None or not env_seed.strip():
        return default
    try:
        return int(env_seed.strip(), 10)
    except ValueError:
        raise InvalidParameterError(f"FADEBER_SEED must be a decimal integer, got {env_seed!r}")


def _grid_values(text: str) -> List[float]:
    return [float(v) for v in snr_grid(*parse_grid(text))]


def _sampled_curve(s: ModulationScheme, grid_text: str, domain: SnrDomain) -> BerCurve:
    start, stop, step = parse_grid(grid_text)
    return ber_curve(s, SnrValue(start, domain), SnrValue(stop, domain), step)


def _fit_options(settings: Settings) -> FitOptions:
    return FitOptions(max_iter=settings.fit.max_iter, sse_rel_tol=settings.fit.sse_rel_tol)


def _quadrature_options(settings: Settings) -> Dict[str, Any]:
    quad = settings.quadrature
    return {
        'rel_tol': quad.rel_tol,
        'abs_tol': quad.abs_tol,
        'max_evaluations': quad.max_evaluations,
    }


def _workers(args: argparse.Namespace, settings: Settings) -> int:
    return args.workers if args.workers is not None else settings.montecarlo.workers


def _samples(args: argparse.Namespace, settings: Settings) -> int:
    return args.samples if args.samples is not None else settings.montecarlo.samples


def _resolve_fit(args: argparse.Namespace, s: ModulationScheme, settings: Settings) -> GaussianFit:
    if args.fit:
        return parse_fit(args.fit)
    fit = published_fit(s)
    if fit is not None:
        return fit
    logger.info(f"No published constants for {s.label}; fitting on {settings.fit.grid}")
    fit, report = fit_gaussian(
        _sampled_curve(s, settings.fit.grid, SnrDomain.DECIBEL), options=_fit_options(settings)
    )
    if not report.converged:
        raise ConvergenceError(f"Gaussian fit for {s.label} did not converge", fit)
    return fit


def cmd_fit(args: argparse.Namespace, settings: Settings) -> int:
    domain = SnrDomain.parse(args.domain)
    if args.data:
        curve = load_ber_curve(args.data, domain)
    else:
        curve = _sampled_curve(ModulationScheme.parse(args.scheme), args.grid or settings.fit.grid,
                               domain)

    fit, report = fit_gaussian(curve, options=_fit_options(settings))
    values: Dict[str, object] = {'a': fit.a, 'b': fit.b, 'c': fit.c}
    values.update(report.as_dict())

    target = open_target(args.out)
    if args.json:
        target.write_json(values)
    else:
        target.write_text("".join(f"{k}={format_value(v)}\n" for k, v in values.items()))

    return EXIT_OK if report.converged else EXIT_NOT_CONVERGED


def cmd_awgn(args: argparse.Namespace, settings: Settings) -> int:
    s = ModulationScheme.parse(args.scheme)
    grid = _grid_values(args.grid)
    fit = parse_fit(args.fit) if args.fit else None

    header = ["ebn0_db", "ber"] + (["ber_gaussian"] if fit else [])
    rows = []
    for ebn0_db in grid:
        row = [ebn0_db, awgn_ber_linear(s, 10.0 ** (ebn0_db / 10.0))]
        if fit:
            row.append(fit.evaluate(ebn0_db))
        rows.append(row)

    open_target(args.out).write_csv(header, rows)
    return EXIT_OK


def cmd_fading(args: argparse.Namespace, settings: Settings) -> int:
    s = ModulationScheme.parse(args.scheme)
    grid = _grid_values(args.grid)
    workers = _workers(args, settings)
    target = open_target(args.out)

    if args.mode == "all":
        fit = _resolve_fit(args, s, settings)
        rows = compare_curves(s, fit, grid, workers=workers, **_quadrature_options(settings))
        target.write_csv(COMPARISON_HEADER, [_comparison_cells(r) for r in rows])
        return EXIT_OK

    header = ["ebn0_db", MODE_COLUMNS[args.mode]]
    if args.mode == "closed-form":
        points = generalized_fading_curve(
            _resolve_fit(args, s, settings), [10.0 ** (v / 10.0) for v in grid]
        )
        target.write_csv(header, [[v, p.ber] for v, p in zip(grid, points)])
        return EXIT_OK

    fit = None if args.mode == "exact" else _resolve_fit(args, s, settings)
    quad = _quadrature_options(settings)
    target.write_csv(
        header,
        [[v, evaluate_mode(args.mode, s, fit, 10.0 ** (v / 10.0), **quad)] for v in grid],
    )
    return EXIT_OK


def cmd_mc(args: argparse.Namespace, settings: Settings) -> int:
    s = ModulationScheme.parse(args.scheme)
    cfg = McConfig(
        seed=resolve_seed(args.seed, settings.montecarlo.seed),
        n_samples=_samples(args, settings),
        mode=McMode.BIT_LEVEL if args.bit_level else McMode.SEMI_ANALYTIC,
    )
    estimate = estimate_fading_ber(
        s, 10.0 ** (args.ebn0_db / 10.0), cfg, workers=_workers(args, settings)
    )
    open_target(args.out).write_csv(
        ["mean", "std_error", "n"], [[estimate.mean, estimate.std_error, estimate.n]]
    )
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace, settings: Settings) -> int:
    target = open_target(args.out)

    if args.table is not None:
        grid_text = args.grid or settings.reproduce.table_grid
        if args.table == 1:
            header, rows = _table_constants(grid_text, settings)
        elif args.table == 2:
            header, rows = _table_metrics(grid_text, settings)
        else:
            raise InvalidParameterError(f"Unknown table {args.table}; expected 1 or 2")
        target.write_csv(header, rows)
        return EXIT_OK

    s = figure_scheme(args.figure)
    fit = PUBLISHED_FITS[FIGURE_SCHEMES[args.figure]]
    grid = _grid_values(args.grid or settings.reproduce.figure_grid)
    workers = _workers(args, settings)
    comparison = compare_curves(s, fit, grid, workers=workers, **_quadrature_options(settings))

    header = list(COMPARISON_HEADER)
    rows = [_comparison_cells(r) for r in comparison]
    if args.seed is not None:
        cfg = McConfig(seed=args.seed, n_samples=_samples(args, settings))
        header += ["ber_montecarlo", "mc_std_error"]
        for row, ebn0_db in zip(rows, grid):
            estimate = estimate_fading_ber(s, 10.0 ** (ebn0_db / 10.0), cfg, workers=workers)
            row += [estimate.mean, estimate.std_error]

    target.write_csv(header, rows)
    return EXIT_OK


def _table_constants(grid_text: str, settings: Settings) -> Tuple[List[str], List[list]]:
    header = ["scheme"]
    header += [f"{p}_published" for p in "abc"]
    header += [f"{p}_fitted" for p in "abc"]
    header += [f"{p}_delta" for p in "abc"]
    header.append("converged")

    rows = []
    for label, published in PUBLISHED_FITS.items():
        curve = _sampled_curve(ModulationScheme.parse(label), grid_text, SnrDomain.DECIBEL)
        fitted, report = fit_gaussian(curve, init=published, options=_fit_options(settings))
        if not report.converged:
            logger.warning(f"Refit of {label} did not converge; reporting best parameters")
        pub = [published.a, published.b, published.c]
        own = [fitted.a, fitted.b, fitted.c]
        rows.append([label, *pub, *own, *(o - p for o, p in zip(own, pub)), report.converged])
    return header, rows


def _table_metrics(grid_text: str, settings: Settings) -> Tuple[List[str], List[list]]:
    header = ["scheme"]
    for name in METRIC_NAMES:
        header += [f"{name}_published", f"{name}_evaluated", f"{name}_fitted", f"{name}_delta"]

    rows = []
    for label, published in PUBLISHED_FITS.items():
        curve = _sampled_curve(ModulationScheme.parse(label), grid_text, SnrDomain.DECIBEL)
        evaluated = goodness_of_fit(curve, published).as_dict()
        _, refit = fit_gaussian(curve, init=published, options=_fit_options(settings))
        reported = PUBLISHED_METRICS[label]
        row: list = [label]
        for name in METRIC_NAMES:
            pub = getattr(reported, name)
            row += [pub, evaluated[name], getattr(refit, name), evaluated[name] - pub]
        rows.append(row)
    return header, rows


def _comparison_cells(row: ComparisonRow) -> list:
    return [row.ebn0_db, row.ber_generalized, row.ber_exact, row.ber_quadrature, row.ratio]


def _common_options() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Settings file merged over the defaults")
    common.add_argument("--verbose", "-v", action="store_true",
                        help="Log progress and system information to stderr")
    common.add_argument("--out", type=Path, help="Write output to FILE instead of stdout")
    return common


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with the fit, awgn, fading, mc and reproduce subcommands."""
    common = _common_options()
    parser = argparse.ArgumentParser(
        prog="fadeber",
        description="Gaussian BER modelling and Rayleigh-fading averages",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True

    fit = sub.add_parser("fit", parents=[common], help="Fit the Gaussian model to an AWGN curve")
    source = fit.add_mutually_exclusive_group(required=True)
    source.add_argument("--scheme", help="Scheme such as qpsk, 16qam, bfsk, bask, 8fsk")
    source.add_argument("--data", type=Path, help="CSV file with snr,ber columns")
    fit.add_argument("--grid", help="start:stop:step (default from settings)")
    fit.add_argument("--domain", choices=["db", "linear"], default="db")
    fit.add_argument("--json", action="store_true", help="Print a JSON object")
    fit.set_defaults(handler=cmd_fit)

    awgn = sub.add_parser("awgn", parents=[common], help="Tabulate the AWGN BER")
    awgn.add_argument("--scheme", required=True)
    awgn.add_argument("--grid", required=True, help="start:stop:step in dB")
    awgn.add_argument("--fit", help="Gaussian constants a,b,c to tabulate alongside")
    awgn.set_defaults(handler=cmd_awgn)

    fading = sub.add_parser("fading", parents=[common], help="Tabulate Rayleigh-fading BER")
    fading.add_argument("--scheme", required=True)
    fading.add_argument("--grid", required=True, help="start:stop:step in dB")
    fading.add_argument("--mode", choices=["all", *MODE_COLUMNS], default="all")
    fading.add_argument("--fit", help="Gaussian constants a,b,c (default: published or fitted)")
    fading.add_argument("--workers", type=int)
    fading.set_defaults(handler=cmd_fading)

    mc = sub.add_parser("mc", parents=[common], help="Monte Carlo fading BER at one Eb/N0")
    mc.add_argument("--scheme", required=True)
    mc.add_argument("--ebn0-db", type=float, required=True)
    mc.add_argument("--samples", type=int)
    mc.add_argument("--seed", type=int, help="Seed (default: FADEBER_SEED, then settings)")
    mc.add_argument("--bit-level", action="store_true", help="Simulate bits (QPSK only)")
    mc.add_argument("--workers", type=int)
    mc.set_defaults(handler=cmd_mc)

    reproduce = sub.add_parser("reproduce", parents=[common],
                               help="Regenerate the published tables and comparison figures")
    which = reproduce.add_mutually_exclusive_group(required=True)
    which.add_argument("--table", type=int, help="1: constants, 2: fit metrics")
    which.add_argument("--figure", type=int, help="1 QPSK, 2 16-QAM, 3 BFSK, 4 BASK")
    reproduce.add_argument("--grid", help="start:stop:step in dB")
    reproduce.add_argument("--seed", type=int, help="Add Monte Carlo columns with this seed")
    reproduce.add_argument("--samples", type=int)
    reproduce.add_argument("--workers", type=int)
    reproduce.set_defaults(handler=cmd_reproduce)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Run the command line and return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    try:
        settings = load_settings(args.config)
    except ConfigurationError as e:
        configure_logging_from_env()
        print(f"fadeber: error: {e}", file=sys.stderr)
        return EXIT_INVALID

    level = "INFO" if args.verbose else settings.logging.level
    root_logger = configure_logging_from_env(level, settings.logging.json_format)
    if args.verbose:
        log_system_info(root_logger)

    handler: Handler = args.handler
    try:
        return handler(args, settings)
    except (InvalidParameterError, ConfigurationError) as e:
        logger.debug(f"{args.command} rejected its arguments", exc_info=True)
        print(f"fadeber: error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as e:
        print(f"fadeber: error: {e}", file=sys.stderr)
        return EXIT_NOT_CONVERGED


def run_fit(argv: Sequence[str]) -> int:
    return main(["fit", *argv])


def run_awgn(argv: Sequence[str]) -> int:
    return main(["awgn", *argv])


def run_fading(argv: Sequence[str]) -> int:
    return main(["fading", *argv])


def run_mc(argv: Sequence[str]) -> int:
    return main(["mc", *argv])


def run_reproduce(argv: Sequence[str]) -> int:
    return main(["reproduce", *argv])


if __name__ == "__main__":
    sys.exit(main())
