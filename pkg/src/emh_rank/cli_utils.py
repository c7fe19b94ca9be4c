"""CLI utilities for argument parser construction.

Every subcommand shares option groups (datasets, measure parameters, SIR
parameters, logging) so a JSON config file and the flags cover the same keys.
"""

import argparse
import sys
from typing import Any, NoReturn

from . import __version__
from .emh import SVectorStrategy
from .errors import EXIT_USAGE
from .log_utils import LOG_LEVELS
from .measures import DEFAULT_TABLE_MEASURES, registry


class CliArgumentParser(argparse.ArgumentParser):
    """ArgumentParser that exits with the usage-error code."""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def add_logging_options(parser: argparse.ArgumentParser) -> None:
    """Add logging options that apply to all commands.

    Args:
        parser: ArgumentParser to add options to
    """
    parser.add_argument(
        "--verbose",
        action="store_true",
        help="Show progress information (same as --log-level INFO)",
    )
    parser.add_argument(
        "--log-level",
        default=None,
        choices=LOG_LEVELS,
        type=str.upper,
        help="Logging level (default: WARNING)",
    )
    parser.add_argument(
        "--log-file",
        default=None,
        help="Also write structured JSON logs to this file",
    )


def add_dataset_options(parser: argparse.ArgumentParser) -> None:
    """Add dataset selection options.

    Args:
        parser: ArgumentParser to add options to
    """
    parser.add_argument(
        "--config",
        default=None,
        help="JSON experiment config file; flags override its values",
    )
    parser.add_argument(
        "--dataset",
        action="append",
        default=None,
        metavar="PATH|NAME",
        help="Edge-list file or manifest dataset name (repeatable)",
    )
    parser.add_argument(
        "--manifest",
        default=None,
        help="Dataset manifest (default: data/manifest.json)",
    )


def add_measure_options(parser: argparse.ArgumentParser) -> None:
    """Add measure selection and measure parameter options.

    Args:
        parser: ArgumentParser to add options to
    """
    group = parser.add_argument_group("Measure Options", "Centrality parameters")
    group.add_argument(
        "--measures",
        action="append",
        default=None,
        help=(
            "Comma-separated measure names, case-insensitive "
            f"(default: {','.join(DEFAULT_TABLE_MEASURES)})"
        ),
    )
    group.add_argument("--alpha1", type=float, help="EMH alpha1 (default: 0.5)")
    group.add_argument("--alpha2", type=float, help="EMH alpha2 (default: 0.3)")
    group.add_argument(
        "--s", type=float, help="EMH position weight base (default: 0.5)"
    )
    group.add_argument(
        "--r", type=float, help="EMH position weight scale (default: 10)"
    )
    group.add_argument(
        "--s-vector",
        choices=[s.value for s in SVectorStrategy],
        default=None,
        help="Cumulative vector construction (default: full)",
    )
    group.add_argument(
        "--ksd-alpha", type=float, help="ksd alpha (default: per dataset, else 0.9)"
    )
    group.add_argument(
        "--ksd-mu", type=float, help="ksd mu (default: per dataset, else 0.2)"
    )
    group.add_argument(
        "--cdc-alpha",
        type=float,
        help="Edge weight exponent of cdc / cks (default: 0.5)",
    )
    group.add_argument(
        "--radius", type=int, help="Gravity truncation radius in hops (default: 3)"
    )
    group.add_argument(
        "--weight-neighborhood-as-printed",
        action="store_true",
        help="cdc / cks variant weighting the node's own benchmark inside the sum",
    )
    group.add_argument(
        "--jobs",
        type=int,
        default=None,
        help="Parallel workers for SIR and gravity; -1 uses all cores (default: 1)",
    )
    group.add_argument(
        "--out-dir",
        default=None,
        help="Output directory (default: results)",
    )


def add_sir_options(parser: argparse.ArgumentParser) -> None:
    """Add SIR ground-truth and beta grid options.

    Args:
        parser: ArgumentParser to add options to
    """
    group = parser.add_argument_group("SIR Options", "Ground-truth simulation")
    group.add_argument(
        "--beta-grid",
        default=None,
        metavar="START:STOP:STEP",
        help="Plot grid of infection rates (default: 0.01 to beta_th + 0.15)",
    )
    group.add_argument(
        "--delta",
        type=float,
        help="Averaging grid spacing above beta_th (default: 0.01)",
    )
    group.add_argument(
        "--steps", type=int, help="Number of averaging grid points (default: 10)"
    )
    group.add_argument("--runs", type=int, help="Runs per seed node (default: 1000)")
    group.add_argument("--seed", type=int, help="Master seed (default: 20240601)")
    group.add_argument("--gamma", type=float, help="Recovery probability (default: 1)")
    group.add_argument(
        "--eta-as-printed",
        action="store_true",
        help="Keep the sign of the baseline tau in the improvement denominator",
    )


def create_full_parser() -> argparse.ArgumentParser:
    """Create the complete argument parser with all commands and options.

    Returns:
        Complete ArgumentParser with all subcommands
    """
    parser = CliArgumentParser(
        prog="emh-rank",
        description="EMH centrality and SIR-based evaluation of spreader rankings",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog=get_usage_examples(),
    )
    parser.add_argument(
        "--version",
        action="version",
        version=f"%(prog)s {__version__}",
    )

    subparsers = parser.add_subparsers(
        dest="command",
        help="Available commands",
        required=True,
    )

    add_stats_subcommand(subparsers)
    add_rank_subcommand(subparsers)
    add_evaluate_subcommand(subparsers)
    add_trace_subcommand(subparsers)
    add_measures_subcommand(subparsers)

    return parser


def add_stats_subcommand(subparsers: Any) -> None:
    """Add the stats subcommand to the parser.

    Args:
        subparsers: Subparsers object to add command to
    """
    stats_parser = subparsers.add_parser(
        "stats",
        help="Print dataset statistics",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=(
            "Print |V| |E| <k> k_max assortativity for each dataset and compare "
            "with the manifest"
        ),
        epilog=get_stats_examples(),
    )
    add_dataset_options(stats_parser)
    add_logging_options(stats_parser)


def add_rank_subcommand(subparsers: Any) -> None:
    """Add the rank subcommand to the parser.

    Args:
        subparsers: Subparsers object to add command to
    """
    rank_parser = subparsers.add_parser(
        "rank",
        help="Compute centrality scores and monotonicity",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Score every node with the selected measures",
        epilog=get_rank_examples(),
    )
    add_dataset_options(rank_parser)
    add_measure_options(rank_parser)
    add_logging_options(rank_parser)


def add_evaluate_subcommand(subparsers: Any) -> None:
    """Add the evaluate subcommand to the parser.

    Args:
        subparsers: Subparsers object to add command to
    """
    evaluate_parser = subparsers.add_parser(
        "evaluate",
        help="Evaluate measures against SIR ground truth",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=(
            "Compare measure rankings with SIR spreading capability using "
            "Kendall tau, monotonicity and improvement percentage"
        ),
        epilog=get_evaluate_examples(),
    )
    add_dataset_options(evaluate_parser)
    add_measure_options(evaluate_parser)
    add_sir_options(evaluate_parser)
    add_logging_options(evaluate_parser)


def add_trace_subcommand(subparsers: Any) -> None:
    """Add the trace subcommand to the parser.

    Args:
        subparsers: Subparsers object to add command to
    """
    trace_parser = subparsers.add_parser(
        "trace",
        help="Show EMH intermediates around one node",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description="Dump EMH pipeline values of a node and its 2-hop neighborhood",
        epilog=get_trace_examples(),
    )
    add_dataset_options(trace_parser)
    trace_parser.add_argument(
        "--node", required=True, help="Node label as written in the edge list"
    )
    trace_parser.add_argument("--alpha1", type=float, help="EMH alpha1")
    trace_parser.add_argument("--alpha2", type=float, help="EMH alpha2")
    trace_parser.add_argument("--s", type=float, help="EMH position weight base")
    trace_parser.add_argument("--r", type=float, help="EMH position weight scale")
    trace_parser.add_argument(
        "--s-vector",
        choices=[s.value for s in SVectorStrategy],
        default=None,
        help="Cumulative vector construction (default: full)",
    )
    trace_parser.add_argument(
        "--out-dir",
        default=None,
        help="Write trace_<label>.json here instead of printing to stdout",
    )
    add_logging_options(trace_parser)


def add_measures_subcommand(subparsers: Any) -> None:
    """Add the measures subcommand to the parser.

    Args:
        subparsers: Subparsers object to add command to
    """
    measures_parser = subparsers.add_parser(
        "measures",
        help="List available measures",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        description=f"Available measures: {', '.join(registry.list_measures())}",
    )
    add_logging_options(measures_parser)


def get_usage_examples() -> str:
    """Get usage examples for the main help text.

    Returns:
        Formatted usage examples string
    """
    return """Examples:
  # Dataset statistics, checked against data/manifest.json
  emh-rank stats --dataset Dolphins --dataset Polbooks

  # Scores and monotonicity for the default measure set
  emh-rank rank --dataset Dolphins --out-dir results

  # Kendall tau against SIR with 100 runs per node, 4 workers
  emh-rank evaluate --dataset Dolphins --runs 100 --jobs 4

  # EMH intermediates around one node
  emh-rank trace --dataset Dolphins --node 15

  # Available measures
  emh-rank measures"""


def get_stats_examples() -> str:
    """Get usage examples for the stats command.

    Returns:
        Formatted stats examples string
    """
    return """Examples:
  # One row per dataset: |V| |E| <k> k_max assortativity
  emh-rank stats --dataset data/dolphins.txt

  # All manifest datasets at once
  emh-rank stats --dataset Dolphins --dataset Jazz --dataset Yeast"""


def get_rank_examples() -> str:
    """Get usage examples for the rank command.

    Returns:
        Formatted rank examples string
    """
    return """Examples:
  # Default measures (cdc,cks,cn,DC,EMH,G,IGC,ksd)
  emh-rank rank --dataset Dolphins

  # EMH stages only, with the distinct-value cumulative vector
  emh-rank rank --dataset Dolphins --measures IH,MC,IMH,EMH --s-vector distinct

  # Custom parameters
  emh-rank rank --dataset my_graph.txt --alpha1 0.6 --alpha2 0.2 --r 5"""


def get_evaluate_examples() -> str:
    """Get usage examples for the evaluate command.

    Returns:
        Formatted evaluate examples string
    """
    return """Examples:
  # Default grids: 0.01..beta_th+0.15 for curves, beta_th+k*0.01 for averaging
  emh-rank evaluate --dataset Dolphins

  # Quick run
  emh-rank evaluate --dataset Dolphins --runs 100 --steps 5 --jobs -1

  # Large networks (USair, Email, Yeast): SIR dominates the runtime, use all cores
  emh-rank evaluate --dataset Yeast --jobs -1

  # Explicit plot grid and seed
  emh-rank evaluate --dataset Jazz --beta-grid 0.01:0.10:0.01 --seed 7

  # Everything from a config file, overriding the output directory
  emh-rank evaluate --config experiment.json --out-dir runs/2024"""


def get_trace_examples() -> str:
    """Get usage examples for the trace command.

    Returns:
        Formatted trace examples string
    """
    return """Examples:
  # Print JSON records to stdout
  emh-rank trace --dataset Dolphins --node 15

  # Write results/trace_15.json
  emh-rank trace --dataset Dolphins --node 15 --out-dir results"""
