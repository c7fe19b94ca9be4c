"""Drivers behind the ``stats``, ``rank``, ``evaluate`` and ``trace`` commands.

Each driver loads its datasets, computes what the command needs and writes
the result files; printing is left to the command handlers in ``main``.
"""

from __future__ import annotations

import logging
import re
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import structlog

from .baselines import ScoreVector
from .config import ExperimentConfig
from .datasets import (
    DatasetCheck,
    Manifest,
    ResolvedDataset,
    check_stats,
    load_manifest,
    resolve_dataset,
)
from .emh import EmhTrace, emh_pipeline
from .errors import UsageError
from .file_utils import format_float, save_csv, save_json
from .graph import Graph, GraphStats, bfs_layers, graph_stats, read_edge_list
from .measures import MeasureContext, registry
from .metrics import GRID_DECIMALS, Evaluation, evaluate_measures, score_monotonicity
from .sir import SirOutcome, epidemic_threshold

logger = logging.getLogger(__name__)
structured_logger = structlog.get_logger(__name__)

TRACE_HOPS = 2
REFERENCE_MEASURE = "EMH"
# simulated outbreaks on one worker before suggesting --jobs -1
SERIAL_RUN_HINT = 2_000_000

_UNSAFE_CHARS = re.compile(r"[^\w.-]+")


def safe_name(name: str) -> str:
    """File-system friendly version of a dataset name or node label."""
    return _UNSAFE_CHARS.sub("_", name).strip("_") or "unnamed"


@dataclass
class LoadedDataset:
    dataset: ResolvedDataset
    graph: Graph

    @property
    def name(self) -> str:
        return self.dataset.name


def load_datasets(
    config: ExperimentConfig, first_only: bool = False
) -> tuple[Manifest, list[LoadedDataset]]:
    """Resolve and parse the datasets of ``config``.

    With ``first_only`` only the first dataset is read; the others are
    neither resolved nor parsed.

    Raises:
        UsageError: If no dataset was given
        DatasetNotFoundError: If a dataset cannot be resolved
        EdgeListParseError: On malformed edge lists
    """
    if not config.datasets:
        raise UsageError(
            "No dataset given",
            suggestions=["Pass --dataset PATH|NAME (repeatable) or set 'datasets'"],
        )
    manifest = load_manifest(config.manifest)
    specs = config.datasets[:1] if first_only else config.datasets
    return manifest, [load_dataset(spec, manifest) for spec in specs]


def load_dataset(spec: str, manifest: Manifest) -> LoadedDataset:
    """Resolve ``spec`` against ``manifest`` and parse its edge list."""
    resolved = resolve_dataset(spec, manifest)
    started = time.perf_counter()
    graph = read_edge_list(resolved.path)
    structured_logger.info(
        "Dataset loaded",
        dataset=resolved.name,
        path=str(resolved.path),
        nodes=graph.node_count,
        edges=graph.edge_count,
        elapsed_ms=round((time.perf_counter() - started) * 1000, 1),
    )
    return LoadedDataset(resolved, graph)


def make_context(config: ExperimentConfig, item: LoadedDataset) -> MeasureContext:
    entry = item.dataset.entry
    return MeasureContext(
        graph=item.graph,
        emh_params=config.emh,
        ksd_params=config.ksd_for(entry.ksd_params() if entry else None),
        cdc_alpha=config.cdc_alpha,
        gravity_radius=config.gravity_radius,
        weight_neighborhood_as_printed=config.weight_neighborhood_as_printed,
        n_jobs=config.n_jobs,
    )


@dataclass
class StatsResult:
    name: str
    stats: GraphStats
    check: DatasetCheck | None = None


def run_stats(config: ExperimentConfig) -> list[StatsResult]:
    """Dataset statistics, validated against the manifest where known."""
    _, loaded = load_datasets(config)
    results = []
    for item in loaded:
        stats = graph_stats(item.graph)
        entry = item.dataset.entry
        check = check_stats(stats, entry) if entry else None
        results.append(StatsResult(item.name, stats, check))
    return results


@dataclass
class RankResult:
    name: str
    scores: list[ScoreVector]
    monotonicity: dict[str, float]
    published_monotonicity: dict[str, float] = field(default_factory=dict)
    files: list[Path] = field(default_factory=list)


def write_scores(graph: Graph, vector: ScoreVector, path: Path) -> None:
    save_csv(
        path,
        ["node", "score"],
        (
            (label, format_float(float(score)))
            for label, score in zip(graph.labels, vector.scores)
        ),
    )


def run_rank(config: ExperimentConfig) -> tuple[list[RankResult], Path]:
    """Score every dataset with every measure.

    Returns:
        Per-dataset results and the path of the combined monotonicity table
    """
    registry.resolve_all(list(config.measures))
    _, loaded = load_datasets(config)
    results = []
    rows = []
    for item in loaded:
        context = make_context(config, item)
        vectors = registry.compute(list(config.measures), context)
        dataset_dir = config.out_dir / safe_name(item.name)
        result = RankResult(
            name=item.name,
            scores=vectors,
            monotonicity={},
            published_monotonicity=(
                item.dataset.entry.published_monotonicity if item.dataset.entry else {}
            ),
        )
        for vector in vectors:
            path = dataset_dir / f"scores_{vector.measure_name}.csv"
            write_scores(item.graph, vector, path)
            result.files.append(path)
            value = score_monotonicity(vector)
            result.monotonicity[vector.measure_name] = value
            rows.append((item.name, vector.measure_name, format_float(value)))
        results.append(result)

    path = config.out_dir / "monotonicity.csv"
    save_csv(path, ["network", "measure", "monotonicity"], rows)
    return results, path


@dataclass
class EvaluateResult:
    name: str
    beta_th: float
    evaluation: Evaluation
    published_avg_tau: dict[str, float] = field(default_factory=dict)
    files: list[Path] = field(default_factory=list)


def _write_evaluation(
    config: ExperimentConfig, item: LoadedDataset, result: EvaluateResult
) -> None:
    dataset_dir = config.out_dir / safe_name(item.name)
    evaluation = result.evaluation

    tau_path = dataset_dir / "tau_curve.csv"
    save_csv(
        tau_path,
        ["measure", "beta", "tau"],
        (
            (name, format_float(beta, GRID_DECIMALS), format_float(tau))
            for name, report in evaluation.reports.items()
            for beta, tau in report.tau_curve
        ),
    )
    eta_path = dataset_dir / "eta_curve.csv"
    save_csv(
        eta_path,
        ["baseline", "beta", "eta_pct"],
        (
            (name, format_float(beta, GRID_DECIMALS), format_float(eta))
            for name, beta, eta in evaluation.eta_curve
        ),
    )

    reference = evaluation.reports.get(REFERENCE_MEASURE)
    averaged_path = dataset_dir / "averaged_tau.csv"
    save_csv(
        averaged_path,
        ["measure", "avg_tau", "monotonicity", "eta_pct"],
        (
            (
                name,
                format_float(report.avg_tau),
                format_float(report.monotonicity),
                format_float(reference.eta_vs[name])
                if reference is not None and name in reference.eta_vs
                else "",
            )
            for name, report in evaluation.reports.items()
        ),
    )

    report_path = dataset_dir / "report.json"
    save_json(
        report_path,
        {
            "dataset": item.name,
            "nodes": item.graph.node_count,
            "edges": item.graph.edge_count,
            "beta_th": result.beta_th,
            "plot_grid": evaluation.beta_grid,
            "averaging_grid": evaluation.averaging_grid,
            "config": config.to_dict(),
            "reports": [r.to_dict() for r in evaluation.reports.values()],
            "published_avg_tau": result.published_avg_tau,
        },
    )
    result.files.extend([tau_path, eta_path, averaged_path, report_path])


def serial_run_hint(
    config: ExperimentConfig, graph: Graph, beta_count: int
) -> str | None:
    """Suggest parallel workers when a serial evaluation will take minutes."""
    if config.n_jobs != 1:
        return None
    outbreaks = graph.node_count * config.sir.runs * beta_count
    if outbreaks < SERIAL_RUN_HINT:
        return None
    return (
        f"{outbreaks:,} SIR runs on a single worker; "
        "pass --jobs -1 to use all cores"
    )


def run_evaluate(config: ExperimentConfig) -> list[EvaluateResult]:
    """Evaluate measures against SIR ground truth on every dataset."""
    registry.resolve_all(list(config.measures))
    _, loaded = load_datasets(config)
    results = []
    for item in loaded:
        beta_th = epidemic_threshold(item.graph)
        # validate both grids before any simulation
        averaging = config.beta_grid.averaging_betas(beta_th)
        plot = config.beta_grid.plot_betas(beta_th)
        hint = serial_run_hint(config, item.graph, len(set(plot) | set(averaging)))
        if hint:
            logger.warning(hint)
        structured_logger.info(
            "Evaluation started",
            dataset=item.name,
            beta_th=round(beta_th, 6),
            plot_points=len(plot),
            averaging_points=len(averaging),
            runs=config.sir.runs,
        )

        context = make_context(config, item)
        vectors = registry.compute(list(config.measures), context)
        sir_dir = config.out_dir / safe_name(item.name) / "sir"
        written: list[Path] = []

        def keep_outcome(outcome: SirOutcome, graph: Graph = item.graph) -> None:
            beta_text = format_float(outcome.beta, GRID_DECIMALS)
            path = sir_dir / f"spread_{beta_text}.csv"
            sidecar = outcome.save(graph, path)
            written.extend([path, sidecar])

        evaluation = evaluate_measures(
            item.graph,
            vectors,
            plot,
            averaging,
            config.sir,
            n_jobs=config.n_jobs,
            reference=REFERENCE_MEASURE,
            eta_as_printed=config.eta_as_printed,
            on_outcome=keep_outcome,
        )
        entry = item.dataset.entry
        result = EvaluateResult(
            name=item.name,
            beta_th=beta_th,
            evaluation=evaluation,
            published_avg_tau=entry.published_avg_tau if entry else {},
            files=written,
        )
        _write_evaluation(config, item, result)
        results.append(result)
    return results


def build_trace(
    graph: Graph, trace: EmhTrace, label: str, hops: int = TRACE_HOPS
) -> list[dict[str, Any]]:
    """Trace records of ``label`` and every node within ``hops`` of it.

    Raises:
        UnknownNodeError: If the label is not in the graph
    """
    v = graph.index_of(label)
    records = [{**trace.record(graph, v), "hop": 0}]
    for hop, layer in enumerate(bfs_layers(graph, v, hops), start=1):
        records.extend({**trace.record(graph, u), "hop": hop} for u in layer)
    return records


@dataclass
class TraceResult:
    document: dict[str, Any]
    path: Path | None = None


def run_trace(
    config: ExperimentConfig, label: str, write: bool = False
) -> TraceResult:
    """EMH intermediates around one node of the first dataset."""
    _, loaded = load_datasets(config, first_only=True)
    item = loaded[0]
    if len(config.datasets) > 1:
        logger.warning(f"trace uses only the first dataset ({item.name})")
    item.graph.index_of(label)
    trace = emh_pipeline(item.graph, config.emh)
    document = {
        "dataset": item.name,
        "node": label,
        "params": config.emh.to_dict(),
        "records": build_trace(item.graph, trace, label),
    }
    path = None
    if write:
        path = config.out_dir / f"trace_{safe_name(label)}.json"
        save_json(path, document)
    return TraceResult(document=document, path=path)
