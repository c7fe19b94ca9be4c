"""Dataset manifest: known networks, their published statistics and files.

The manifest is a JSON document with a ``datasets`` list. Entries are
validated on load the same way every record is checked field by field, so a
broken manifest reports all of its problems at once.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .baselines import KsdParams
from .errors import DataError, DatasetNotFoundError
from .file_utils import load_json
from .graph import GraphStats

logger = logging.getLogger(__name__)

DEFAULT_MANIFEST = Path(__file__).resolve().parents[2] / "data" / "manifest.json"

# absolute tolerances for the rounded published columns
AVG_DEGREE_TOLERANCE = 5e-3
ASSORTATIVITY_TOLERANCE = 1e-4

_REQUIRED_FIELDS = {
    "name": str,
    "file": str,
    "nodes": int,
    "edges": int,
    "avg_degree": (int, float),
    "max_degree": int,
}


@dataclass(frozen=True)
class DatasetEntry:
    """One manifest record."""

    name: str
    file: str
    nodes: int
    edges: int
    avg_degree: float
    max_degree: int
    ksd_alpha: float | None = None
    ksd_mu: float | None = None
    assortativity: float | None = None
    source: str = ""
    source_url: str | None = None
    published_avg_tau: dict[str, float] = field(default_factory=dict)
    published_monotonicity: dict[str, float] = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> DatasetEntry:
        return cls(
            name=data["name"],
            file=data["file"],
            nodes=int(data["nodes"]),
            edges=int(data["edges"]),
            avg_degree=float(data["avg_degree"]),
            max_degree=int(data["max_degree"]),
            ksd_alpha=data.get("ksd_alpha"),
            ksd_mu=data.get("ksd_mu"),
            assortativity=data.get("assortativity"),
            source=data.get("source", ""),
            source_url=data.get("source_url"),
            published_avg_tau=dict(data.get("published_avg_tau", {})),
            published_monotonicity=dict(data.get("published_monotonicity", {})),
        )

    def ksd_params(self) -> KsdParams:
        """Per-network ksd parameters, defaulting to alpha=0.9, mu=0.2."""
        defaults = KsdParams()
        return KsdParams(
            alpha=defaults.alpha if self.ksd_alpha is None else self.ksd_alpha,
            mu=defaults.mu if self.ksd_mu is None else self.ksd_mu,
        )


def validate_entry(data: Any, position: int) -> list[str]:
    """Return the problems of one raw manifest record (empty when valid)."""
    where = f"datasets[{position}]"
    if not isinstance(data, dict):
        return [f"{where} is not an object (got {type(data).__name__})"]

    errors = []
    for key, expected in _REQUIRED_FIELDS.items():
        if key not in data:
            errors.append(f"{where} missing required '{key}' field")
        elif not isinstance(data[key], expected) or isinstance(data[key], bool):
            errors.append(f"{where}.{key} has wrong type {type(data[key]).__name__}")

    for key in ("ksd_alpha", "ksd_mu"):
        value = data.get(key)
        if value is not None and not (
            isinstance(value, (int, float)) and 0.0 < value < 1.0
        ):
            errors.append(f"{where}.{key} must be in (0, 1), got {value!r}")

    for key in ("published_avg_tau", "published_monotonicity"):
        value = data.get(key, {})
        if not isinstance(value, dict):
            errors.append(f"{where}.{key} must be an object")
    return errors


@dataclass
class Manifest:
    """Loaded manifest; ``base_dir`` anchors the relative ``file`` fields."""

    base_dir: Path
    entries: dict[str, DatasetEntry] = field(default_factory=dict)

    def names(self) -> list[str]:
        return [entry.name for entry in self.entries.values()]

    def get(self, name: str) -> DatasetEntry | None:
        return self.entries.get(name.lower())

    def path_of(self, entry: DatasetEntry) -> Path:
        return self.base_dir / entry.file

    def find_by_path(self, path: Path) -> DatasetEntry | None:
        """Entry whose file resolves to ``path``, else one with the same file name."""
        resolved = path.resolve()
        for entry in self.entries.values():
            if self.path_of(entry).resolve() == resolved:
                return entry
        for entry in self.entries.values():
            if entry.file == path.name:
                return entry
        return None


def load_manifest(path: Path | None = None) -> Manifest:
    """Load and validate a manifest.

    A missing manifest yields an empty one, so datasets can still be given by
    path.

    Raises:
        DataError: If the file is not valid JSON or has invalid records
    """
    path = path or DEFAULT_MANIFEST
    try:
        raw = load_json(path, default=None)
    except json.JSONDecodeError as e:
        raise DataError(
            f"Manifest is not valid JSON: {path}",
            details=f"line {e.lineno}, column {e.colno}: {e.msg}",
        ) from e

    manifest = Manifest(base_dir=path.parent)
    if raw is None:
        logger.debug(f"No manifest at {path}")
        return manifest

    records = raw.get("datasets") if isinstance(raw, dict) else None
    if not isinstance(records, list):
        raise DataError(f"Manifest {path} has no 'datasets' list")

    errors: list[str] = []
    for position, record in enumerate(records):
        problems = validate_entry(record, position)
        if problems:
            errors.extend(problems)
            continue
        entry = DatasetEntry.from_dict(record)
        key = entry.name.lower()
        if key in manifest.entries:
            errors.append(f"datasets[{position}] duplicates name '{entry.name}'")
            continue
        manifest.entries[key] = entry

    if errors:
        raise DataError(
            f"Invalid manifest {path}",
            details="\n".join(errors),
            suggestions=["Compare with data/manifest.json in the repository"],
        )
    logger.debug(f"Loaded {len(manifest.entries)} datasets from {path}")
    return manifest


@dataclass(frozen=True)
class ResolvedDataset:
    """A dataset argument resolved to a file, with its manifest entry if known."""

    name: str
    path: Path
    entry: DatasetEntry | None = None


def resolve_dataset(spec: str, manifest: Manifest) -> ResolvedDataset:
    """Resolve a ``--dataset`` value given as a file path or a manifest name.

    Raises:
        DatasetNotFoundError: If neither a file nor a present manifest file matches
    """
    candidate = Path(spec)
    if candidate.is_file():
        entry = manifest.find_by_path(candidate)
        name = entry.name if entry else candidate.stem
        return ResolvedDataset(name=name, path=candidate, entry=entry)

    entry = manifest.get(spec)
    if entry is not None:
        path = manifest.path_of(entry)
        if path.is_file():
            return ResolvedDataset(name=entry.name, path=path, entry=entry)
        raise DatasetNotFoundError(path, manifest.names())

    raise DatasetNotFoundError(candidate, manifest.names())


@dataclass(frozen=True)
class DatasetCheck:
    """Comparison of computed statistics with a manifest entry."""

    name: str
    mismatches: dict[str, tuple[Any, Any]]

    @property
    def ok(self) -> bool:
        return not self.mismatches


def check_stats(stats: GraphStats, entry: DatasetEntry) -> DatasetCheck:
    """Compare graph statistics with the published columns of ``entry``."""
    mismatches: dict[str, tuple[Any, Any]] = {}
    for column, expected, observed in (
        ("nodes", entry.nodes, stats.num_nodes),
        ("edges", entry.edges, stats.num_edges),
        ("max_degree", entry.max_degree, stats.max_degree),
    ):
        if expected != observed:
            mismatches[column] = (expected, observed)

    if abs(entry.avg_degree - stats.avg_degree) > AVG_DEGREE_TOLERANCE:
        mismatches["avg_degree"] = (entry.avg_degree, round(stats.avg_degree, 3))

    if entry.assortativity is not None:
        if stats.assortativity is None:
            mismatches["assortativity"] = (entry.assortativity, None)
        elif abs(entry.assortativity - stats.assortativity) > ASSORTATIVITY_TOLERANCE:
            mismatches["assortativity"] = (
                entry.assortativity,
                round(stats.assortativity, 4),
            )
    return DatasetCheck(name=entry.name, mismatches=mismatches)
