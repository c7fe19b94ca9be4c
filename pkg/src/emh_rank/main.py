"""Main CLI entry point for emh-rank."""

import argparse
import json
import sys
from pathlib import Path

from .cli_utils import create_full_parser
from .config import build_config
from .errors import EXIT_OK, EXIT_USAGE, handle_common_errors
from .experiment import REFERENCE_MEASURE, run_evaluate, run_rank, run_stats, run_trace
from .log_utils import setup_logging
from .measures import DEFAULT_TABLE_MEASURES, registry
from .output import OutputFormatter


def create_main_parser() -> argparse.ArgumentParser:
    """Create the main argument parser with subcommands."""
    return create_full_parser()


def configure_logging(args: argparse.Namespace) -> None:
    """Set up logging from ``--log-level`` / ``--verbose`` / ``--log-file``."""
    level = args.log_level or ("INFO" if args.verbose else "WARNING")
    log_file = Path(args.log_file) if args.log_file else None
    setup_logging(level, log_file)


def _delta(value: float, published: float | None) -> float | None:
    return None if published is None else value - published


@handle_common_errors
def handle_stats_command(args: argparse.Namespace) -> int:
    """Handle the stats command."""
    config = build_config(args)
    results = run_stats(config)

    print("Network |V| |E| <k> k_max assortativity")
    for result in results:
        print(f"{result.name} {result.stats.format_row()}")

    for result in results:
        if result.check is not None:
            OutputFormatter.print_dataset_check(result.name, result.check.mismatches)
        elif args.verbose:
            OutputFormatter.print_info(f"{result.name}: not in manifest, not checked")
    return EXIT_OK


@handle_common_errors
def handle_rank_command(args: argparse.Namespace) -> int:
    """Handle the rank command: scores, monotonicity table and files."""
    config = build_config(args)
    results, table_path = run_rank(config)

    for result in results:
        rows = []
        for name, value in result.monotonicity.items():
            published = result.published_monotonicity.get(name)
            rows.append((name, value, published, _delta(value, published)))
        OutputFormatter.print_table(
            f"Monotonicity - {result.name}",
            ["measure", "M", "published", "delta"],
            rows,
        )

    OutputFormatter.print_written_files(
        [path for result in results for path in result.files] + [table_path]
    )
    return EXIT_OK


@handle_common_errors
def handle_evaluate_command(args: argparse.Namespace) -> int:
    """Handle the evaluate command: averaged tau, monotonicity and eta."""
    config = build_config(args)
    results = run_evaluate(config)

    for result in results:
        reports = result.evaluation.reports
        reference = reports.get(REFERENCE_MEASURE)
        rows = []
        for name, report in reports.items():
            published = result.published_avg_tau.get(name)
            eta = reference.eta_vs.get(name) if reference is not None else None
            rows.append(
                (
                    name,
                    report.avg_tau,
                    report.monotonicity,
                    eta,
                    published,
                    _delta(report.avg_tau, published),
                )
            )
        OutputFormatter.print_table(
            f"Averaged Kendall tau - {result.name} (beta_th = {result.beta_th:.4f})",
            ["measure", "avg_tau", "M", "eta_pct", "published", "delta"],
            rows,
        )

    OutputFormatter.print_written_files(
        [path for result in results for path in result.files]
    )
    return EXIT_OK


@handle_common_errors
def handle_trace_command(args: argparse.Namespace) -> int:
    """Handle the trace command."""
    config = build_config(args)
    result = run_trace(config, args.node, write=args.out_dir is not None)

    if result.path is None:
        print(json.dumps(result.document, indent=2, ensure_ascii=False))
    else:
        OutputFormatter.print_success(f"Trace written to {result.path}")
    return EXIT_OK


@handle_common_errors
def handle_measures_command(args: argparse.Namespace) -> int:
    """Handle the measures command."""
    rows = []
    for name in registry.list_measures():
        measure = registry.resolve(name)
        default = "yes" if name in DEFAULT_TABLE_MEASURES else ""
        rows.append((name, measure.family, default, measure.description))
    OutputFormatter.print_table(
        "Available measures", ["name", "family", "default", "description"], rows
    )
    if args.verbose:
        print("\nNames are matched case-insensitively, e.g. --measures emh,cdc")
    return EXIT_OK


def main() -> int:
    """Main CLI entry point."""
    parser = create_main_parser()
    args = parser.parse_args()
    configure_logging(args)

    handlers = {
        "stats": handle_stats_command,
        "rank": handle_rank_command,
        "evaluate": handle_evaluate_command,
        "trace": handle_trace_command,
        "measures": handle_measures_command,
    }
    handler = handlers.get(args.command)
    if handler is None:
        parser.print_help()
        return EXIT_USAGE

    try:
        return handler(args)
    except KeyboardInterrupt:
        print("\nOperation cancelled by user")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
