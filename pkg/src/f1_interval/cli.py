"""Command-line interface for F1 Interval.

Exit codes: 0 success, 1 every requested method failed, 2 usage error
(bad flags, malformed probabilities, invalid sweep config), 3 domain error
(no relevant documents, Wilson-direct below its minimum nu, nu above the
enumeration cap), 4 numerical failure (a solver did not converge or lost its
bracket).
"""

import argparse
import logging
import sys
from dataclasses import replace
from typing import List, Optional

from . import __version__
from .core import METHODS, ConfusionCounts
from .errors import ConfigError, DomainError, F1IntervalError, UndefinedEstimateError
from .filesystem import load_sweep_config, open_output
from .methods import compute_all, parse_methods, wilson_direct_min_nu
from .output import FORMATS, ci_records, compare_records, exact_records, simulation_records, write_records
from .runner import SweepRunner
from .simulation import (
    DEFAULT_REPLICATES,
    DEFAULT_SEED,
    ENUMERATION_CAP,
    Scenario,
    SimulationConfig,
    exact_coverage_curve,
    get_scenario,
    run_condition,
    wilson_length_comparison,
)
from .ui import select_conditions

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3
EXIT_NUMERIC = 4


def _count(value: str) -> int:
    try:
        count = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value!r}") from None
    if count < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {value!r}")
    return count


def _positive(value: str) -> int:
    count = _count(value)
    if count < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value!r}")
    return count


def _alpha(value: str) -> float:
    try:
        alpha = float(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a number, got {value!r}") from None
    if not (0.0 < alpha < 1.0):
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1), got {value!r}")
    return alpha


def _methods(value: str) -> List[str]:
    try:
        return parse_methods(value)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _scenario(value: str) -> Scenario:
    try:
        return get_scenario(value)
    except DomainError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _probabilities(value: str) -> Scenario:
    try:
        probabilities = [float(part) for part in value.split(',')]
        return Scenario.from_probabilities(probabilities)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"invalid probability vector {value!r}: {e}") from None


def _seed(value: str) -> int:
    seed = _count(value)
    if seed >= 2 ** 64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 bits, got {value!r}")
    return seed


def parse_args(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('-v', '--verbose', action='store_true', help='Enable verbose output')
    common.add_argument('-q', '--quiet', action='store_true', help='Only report warnings and errors')

    parser = argparse.ArgumentParser(
        prog='f1-interval',
        description="Confidence intervals for the F1 score and their coverage properties",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  f1-interval ci --tp 77 --fp 44 --fn 10 --tn 702
  f1-interval simulate --scenario 1 --n 25 --replicates 1000000 --seed 42
  f1-interval sweep -o tables.csv --workers 4
  f1-interval exact --nu 30 --method clopper-pearson --grid 99
  f1-interval compare --nu-max 100

Flags use confusion-matrix names: tp (n11), fp (n10), fn (n01), tn (n00).
        """
    )
    parser.add_argument('--version', action='version', version=f'%(prog)s {__version__}')
    subparsers = parser.add_subparsers(dest='command', metavar='command')
    subparsers.required = True

    ci = subparsers.add_parser('ci', parents=[common], help='Intervals from confusion-matrix counts')
    ci.add_argument('--tp', type=_count, required=True, help='True positives')
    ci.add_argument('--fp', type=_count, required=True, help='False positives')
    ci.add_argument('--fn', type=_count, required=True, help='False negatives')
    ci.add_argument('--tn', type=_count, default=0, help='True negatives (not used by any formula)')
    ci.add_argument('--alpha', type=_alpha, default=0.05, help='Significance level (default: 0.05)')
    ci.add_argument('--methods', type=_methods, default=list(METHODS),
                    help='Comma-separated methods or "all" (default: all)')
    ci.add_argument('--format', choices=FORMATS, default='table', help='Output format (default: table)')
    ci.set_defaults(handler=cmd_ci)

    simulate = subparsers.add_parser('simulate', parents=[common], help='Monte Carlo evaluation of one condition')
    population = simulate.add_mutually_exclusive_group(required=True)
    population.add_argument('--scenario', type=_scenario, help='Built-in scenario 1, 2 or 3')
    population.add_argument('--p', type=_probabilities, metavar='P11,P10,P01,P00',
                            help='Custom cell probabilities')
    simulate.add_argument('--n', type=_positive, required=True, help='Documents per replicate')
    simulate.add_argument('--replicates', type=_positive, default=DEFAULT_REPLICATES,
                          help=f'Number of replicates (default: {DEFAULT_REPLICATES})')
    simulate.add_argument('--seed', type=_seed, default=DEFAULT_SEED, help=f'Master seed (default: {DEFAULT_SEED})')
    simulate.add_argument('--alpha', type=_alpha, default=0.05, help='Significance level (default: 0.05)')
    simulate.add_argument('--methods', type=_methods, default=list(METHODS),
                          help='Comma-separated methods or "all" (default: all)')
    simulate.add_argument('--format', choices=FORMATS, default='table', help='Output format (default: table)')
    simulate.add_argument('--workers', '--threads', dest='workers', type=_positive, default=1,
                          help='Worker processes; never changes results (default: 1)')
    simulate.set_defaults(handler=cmd_simulate)

    sweep = subparsers.add_parser('sweep', parents=[common], help='Run every condition of a sweep config')
    sweep.add_argument('config', nargs='?', help='Sweep config JSON (default: bundled 18-condition grid)')
    sweep.add_argument('-o', '--output', help='Output file (default: stdout)')
    sweep.add_argument('--format', choices=FORMATS, default='csv', help='Output format (default: csv)')
    sweep.add_argument('--replicates', type=_positive, help='Override the configured replicate count')
    sweep.add_argument('--workers', '--threads', dest='workers', type=_positive, default=1,
                       help='Worker processes; never changes results (default: 1)')
    sweep.add_argument('--interactive', action='store_true', help='Pick scenarios and sample sizes interactively')
    sweep.add_argument('--no-progress', action='store_true', help='Hide the progress bar')
    sweep.set_defaults(handler=cmd_sweep)

    exact = subparsers.add_parser('exact', parents=[common], help='Exact conditional coverage by enumeration')
    exact.add_argument('--nu', type=_positive, required=True,
                       help=f'Relevant documents, at most {ENUMERATION_CAP}')
    exact.add_argument('--method', choices=METHODS, required=True, help='Interval method')
    exact.add_argument('--alpha', type=_alpha, default=0.05, help='Significance level (default: 0.05)')
    exact.add_argument('--grid', type=_positive, default=99, help='Number of interior F* grid points (default: 99)')
    exact.add_argument('--format', choices=FORMATS, default='csv', help='Output format (default: csv)')
    exact.set_defaults(handler=cmd_exact)

    compare = subparsers.add_parser('compare', parents=[common],
                                    help='Wilson-direct versus Wilson-indirect lengths across nu')
    compare.add_argument('--nu-min', type=_positive, default=1, help='Smallest nu (default: 1)')
    compare.add_argument('--nu-max', type=_positive, default=100, help='Largest nu (default: 100)')
    compare.add_argument('--alpha', type=_alpha, default=0.05, help='Significance level (default: 0.05)')
    compare.add_argument('--format', choices=FORMATS, default='csv', help='Output format (default: csv)')
    compare.set_defaults(handler=cmd_compare)

    return parser.parse_args(argv)


def cmd_ci(args: argparse.Namespace) -> int:
    """Print the requested intervals for one confusion matrix."""
    if args.tp + args.fp + args.fn == 0:
        raise UndefinedEstimateError()
    counts = ConfusionCounts(args.tp, args.fp, args.fn, args.tn)
    results = compute_all(counts, args.alpha, args.methods)
    for result in results:
        if not result.ok:
            logging.warning(f"{result.method}: {result.error}")
    write_records(ci_records(counts, results), args.format, sys.stdout)

    if not any(result.ok for result in results):
        logging.error("No method produced an interval")
        return EXIT_FAILURE
    return EXIT_OK


def cmd_simulate(args: argparse.Namespace) -> int:
    """Simulate one scenario/sample-size condition."""
    config = SimulationConfig(
        scenario=args.scenario or args.p,
        n=args.n,
        replicates=args.replicates,
        alpha=args.alpha,
        seed=args.seed,
        methods=tuple(args.methods),
    )
    metrics = run_condition(config, workers=args.workers)
    write_records(simulation_records([metrics]), args.format, sys.stdout)
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    """Run a full sweep and write one row per method and condition."""
    sweep = load_sweep_config(args.config)
    if args.replicates:
        sweep = replace(sweep, replicates=args.replicates)
    if args.interactive:
        sweep = select_conditions(sweep)

    runner = SweepRunner(workers=args.workers, show_progress=not args.no_progress)
    conditions = runner.run(sweep)
    with open_output(args.output) as stream:
        write_records(simulation_records(conditions), args.format, stream)
    return EXIT_OK


def cmd_exact(args: argparse.Namespace) -> int:
    """Exact conditional coverage over an F* grid."""
    rows = exact_coverage_curve(args.nu, args.method, args.alpha, args.grid)
    write_records(exact_records(args.nu, args.method, args.alpha, rows), args.format, sys.stdout)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    """Wilson-direct minus Wilson-indirect interval lengths."""
    if args.nu_min > args.nu_max:
        logging.error(f"--nu-min {args.nu_min} exceeds --nu-max {args.nu_max}")
        return EXIT_USAGE
    min_nu = wilson_direct_min_nu(args.alpha)
    if args.nu_min < min_nu:
        logging.info(f"wilson-direct needs nu >= {min_nu}; smaller nu are left out")
    rows = wilson_length_comparison(range(args.nu_min, args.nu_max + 1), args.alpha)
    write_records(compare_records(args.alpha, rows), args.format, sys.stdout)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main CLI entry point."""
    args = parse_args(argv)

    # Setup logging
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format='%(levelname)s: %(message)s', force=True)
    logging.info(f"F1 Interval v{__version__}")

    try:
        return args.handler(args)
    except UndefinedEstimateError as e:
        logging.error(f"Undefined estimate: {e}")
        return EXIT_DOMAIN
    except ConfigError as e:
        logging.error(f"Invalid sweep config: {e}")
        return EXIT_USAGE
    except DomainError as e:
        logging.error(str(e))
        return EXIT_DOMAIN
    except F1IntervalError as e:
        logging.error(f"Numerical failure: {e}")
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
