"""
Command line interface for ThabitSolver
"""
import os
import sys
import argparse
import logging
from typing import List, Optional

from thabit_solver import __version__
from thabit_solver.config import SolverConfig
from thabit_solver.errors import ConfigurationError, SolverError
from thabit_solver.linear_forms import family_bound_details
from thabit_solver.pipeline import (
    EXIT_CONFIG_ERROR,
    EXIT_OK,
    EXIT_REDUCTION_FAILURE,
    exit_status,
    reduce_base,
    run_all,
    run_family,
    write_reports,
)
from thabit_solver.reduction import ReductionFailure
from thabit_solver.search import FORMS, KINDS, EquationFamily, enumerate_solutions
from thabit_solver.sequences import SEQUENCES
from thabit_solver.utils.stats import RunStats
from thabit_solver.utils.text import render_summary

# Set up logging
logging.basicConfig(
    level=logging.INFO,
    format="%(asctime)s - %(levelname)s - %(message)s",
    datefmt="%Y-%m-%d %H:%M:%S"
)
logger = logging.getLogger("thabit_solver")

SEQUENCE_NAMES = sorted(spec.id.value for spec in SEQUENCES.values())


def _add_range_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--b-min", type=int, help="Smallest base b (default: 2)")
    parser.add_argument("--b-max", type=int, help="Largest base b (default: 10)")
    parser.add_argument("--n-max", type=int, help="List solutions up to this index")
    parser.add_argument("--precision-cap", type=int, help="Largest working precision in bits")


def _add_family_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--sequence", required=True, choices=SEQUENCE_NAMES, help="Recurrence sequence")
    parser.add_argument("--form", required=True, choices=sorted(FORMS), help="thabit (+) or williams (-)")
    parser.add_argument("--kind", required=True, choices=sorted(KINDS), help="first (-1) or second (+1)")
    _add_range_arguments(parser)


def parse_arguments(argv: Optional[List[str]] = None) -> argparse.Namespace:
    """
    Parse command line arguments

    Args:
        argv: Arguments without the program name, sys.argv by default

    Returns:
        Parsed arguments object
    """
    parser = argparse.ArgumentParser(
        prog="thabit-solver",
        description="Solve T_n = (b +- 1) * b^l +- 1 for Padovan, Perrin and Narayana numbers",
    )
    parser.add_argument("-V", "--version", action="store_true", help="Show version and exit")
    parser.add_argument("--verbose", "-v", action="store_true", help="Enable verbose logging")
    parser.add_argument("--config", "-c", help="Path to configuration file")

    subparsers = parser.add_subparsers(dest="command", help="Commands")

    solve_parser = subparsers.add_parser("solve", help="Run the full pipeline for one family")
    _add_family_arguments(solve_parser)
    solve_parser.add_argument("--check-paper", action="store_true",
                              help="Compare solutions with the published tables")
    solve_parser.add_argument("--out", help="Write the JSON certificate to this file")

    bound_parser = subparsers.add_parser("bound", help="Print the absolute bound on n per base")
    _add_family_arguments(bound_parser)

    reduce_parser = subparsers.add_parser("reduce", help="Print the reduced bound per base")
    _add_family_arguments(reduce_parser)

    search_parser = subparsers.add_parser("search", help="List solutions up to the search cutoff")
    _add_family_arguments(search_parser)

    all_parser = subparsers.add_parser("all", help="Run the pipeline for all twelve families")
    _add_range_arguments(all_parser)
    all_parser.add_argument("--check-paper", action="store_true",
                            help="Compare solutions with the published tables")
    all_parser.add_argument("--parallel", action="store_true", help="Enable parallel processing")
    all_parser.add_argument("--workers", type=int, help="Number of parallel workers")
    all_parser.add_argument("--out", help="Output directory for certificates")

    config_parser = subparsers.add_parser("config", help="Create or view configuration")
    config_parser.add_argument("--create", action="store_true",
                               help="Create a default configuration file")
    config_parser.add_argument("--file", default="thabit.yaml",
                               help="Path to config file (default: thabit.yaml)")

    return parser.parse_args(argv)


def build_config(args: argparse.Namespace) -> SolverConfig:
    """
    Assemble the run configuration: defaults < YAML file < environment < flags

    Raises:
        ConfigurationError: If the config file is missing or a setting is invalid
    """
    if args.config:
        if not os.path.exists(args.config):
            raise ConfigurationError(f"Configuration file not found: {args.config}")
        logger.info(f"Loading configuration from: {args.config}")
        config = SolverConfig.from_file(args.config)
    else:
        config = SolverConfig()
    config.apply_environment()

    overrides = {
        "b_min": getattr(args, "b_min", None),
        "b_max": getattr(args, "b_max", None),
        "n_max": getattr(args, "n_max", None),
        "precision_cap": getattr(args, "precision_cap", None),
        "max_workers": getattr(args, "workers", None),
    }
    for attribute, value in overrides.items():
        if value is not None:
            setattr(config, attribute, value)
    if getattr(args, "check_paper", False):
        config.check_paper = True
    if getattr(args, "parallel", False):
        config.parallel_processing = True

    config.validate()
    return config


def _family(args: argparse.Namespace) -> EquationFamily:
    return EquationFamily.from_names(args.sequence, args.form, args.kind)


def command_config(args: argparse.Namespace) -> int:
    if args.create:
        if SolverConfig.create_default_config(args.file):
            print(f"Created default configuration file: {args.file}")
            return EXIT_OK
        logger.error(f"Failed to create configuration file: {args.file}")
        return EXIT_CONFIG_ERROR

    if not os.path.exists(args.file):
        print(f"Configuration file not found: {args.file}")
        print("Use --create to create a default configuration file")
        return EXIT_CONFIG_ERROR
    config = SolverConfig.from_file(args.file)
    print("\nCurrent Configuration:")
    print("-" * 30)
    for key, value in config.to_dict().items():
        print(f"{key}: {value}")
    return EXIT_OK


def command_solve(args: argparse.Namespace, config: SolverConfig) -> int:
    report = run_family(_family(args), config.b_min, config.b_max, config)
    if args.out:
        report.save(args.out)
    print(render_summary([report]))
    return exit_status([report])


def command_bound(args: argparse.Namespace, config: SolverConfig) -> int:
    family = _family(args)
    print(f"{family.label}: {family.equation}")
    for b in range(config.b_min, config.b_max + 1):
        details = family_bound_details(family, b, config.precision)
        print(f"  b={b}: S in {details.S}, n < {details.bound}")
    return EXIT_OK


def command_reduce(args: argparse.Namespace, config: SolverConfig) -> int:
    family = _family(args)
    status = EXIT_OK
    print(f"{family.label}: {family.equation}")
    for b in range(config.b_min, config.b_max + 1):
        M = family_bound_details(family, b, config.precision).bound
        result = reduce_base(family, b, M, config)
        if isinstance(result, ReductionFailure):
            print(f"  b={b}: M={M}, failed ({result.reason} after {result.attempts} convergents)")
            status = EXIT_REDUCTION_FAILURE
        else:
            print(f"  b={b}: M={M}, {result.method.value} at k={result.convergent_index}, n <= {result.new_bound}")
    return status


def command_search(args: argparse.Namespace, config: SolverConfig) -> int:
    family = _family(args)
    cutoff = config.search_cutoff(family.sequence.value)
    solutions = enumerate_solutions(family, (config.b_min, config.b_max), cutoff)
    print(f"{family.label}: {family.equation}, n <= {cutoff}")
    for solution in solutions:
        print(f"  (n, b, l) = {solution.triple}: {solution.value}")
    if not solutions:
        print("  no solutions")
    return EXIT_OK


def command_all(args: argparse.Namespace, config: SolverConfig) -> int:
    output_dir = args.out or config.output_dir
    stats = RunStats()
    reports = run_all(config.b_min, config.b_max, config)
    for report in reports:
        stats.record_report(report)
    stats.finish()

    paths = write_reports(reports, output_dir)
    logger.info(f"Wrote {len(paths)} files to {output_dir}")
    stats.save_report(output_dir)
    stats.print_summary()
    return exit_status(reports)


COMMANDS = {
    "solve": command_solve,
    "bound": command_bound,
    "reduce": command_reduce,
    "search": command_search,
    "all": command_all,
}


def main(argv: Optional[List[str]] = None) -> int:
    """
    Main CLI entry point

    Returns:
        Exit code: 0 ok, 2 configuration error, 3 reduction or gap failure,
        4 mismatch with the published tables
    """
    args = parse_arguments(argv)

    if args.version:
        print(f"ThabitSolver version {__version__}")
        return EXIT_OK

    if args.verbose:
        logger.setLevel(logging.DEBUG)

    if args.command == "config":
        return command_config(args)

    if args.command not in COMMANDS:
        print("No command given, try 'thabit-solver --help'")
        return EXIT_CONFIG_ERROR

    try:
        config = build_config(args)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR

    try:
        return COMMANDS[args.command](args, config)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG_ERROR
    except SolverError as e:
        logger.error(f"{args.command} failed: {e}")
        return EXIT_REDUCTION_FAILURE


if __name__ == "__main__":
    sys.exit(main())
