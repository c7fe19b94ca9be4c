"""Tests for the dataset manifest."""

import json
from dataclasses import replace
from pathlib import Path
from typing import Callable

import pytest

from src.emh_rank.baselines import KsdParams
from src.emh_rank.datasets import (
    DEFAULT_MANIFEST,
    DatasetEntry,
    check_stats,
    load_manifest,
    resolve_dataset,
    validate_entry,
)
from src.emh_rank.emh import emh_pipeline
from src.emh_rank.errors import DataError, DatasetNotFoundError
from src.emh_rank.graph import Graph, graph_stats, read_edge_list
from src.emh_rank.metrics import score_monotonicity


class TestLoadManifest:
    """Test loading and validating manifests."""

    def test_bundled_manifest(self) -> None:
        """The repository manifest lists the eight evaluation networks."""
        manifest = load_manifest(DEFAULT_MANIFEST)
        assert manifest.names() == [
            "Dolphins",
            "Polbooks",
            "Jazz",
            "USair",
            "Email",
            "WS",
            "LFR-2000",
            "Yeast",
        ]
        dolphins = manifest.get("dolphins")
        assert dolphins is not None
        assert (dolphins.nodes, dolphins.edges, dolphins.max_degree) == (62, 159, 12)

    def test_fixture_manifest(self, manifest_dir: Path) -> None:
        """Entries are keyed case-insensitively and carry ksd parameters."""
        manifest = load_manifest(manifest_dir / "manifest.json")
        entry = manifest.get("STAR")
        assert entry is not None
        assert entry.ksd_params() == KsdParams(alpha=0.8, mu=0.4)
        assert entry.published_monotonicity == {"EMH": 0.16}
        assert manifest.path_of(entry) == manifest_dir / "star.txt"

    def test_missing_manifest_is_empty(self, tmp_path: Path) -> None:
        """Datasets can still be given by path without a manifest."""
        manifest = load_manifest(tmp_path / "absent.json")
        assert manifest.names() == []

    def test_invalid_json(self, tmp_path: Path) -> None:
        """Unparseable manifests raise DataError."""
        path = tmp_path / "manifest.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(DataError, match="not valid JSON"):
            load_manifest(path)

    def test_invalid_records_reported_together(self, tmp_path: Path) -> None:
        """Every broken record appears in the error details."""
        path = tmp_path / "manifest.json"
        records = [{"name": "A"}, "oops"]
        path.write_text(json.dumps({"datasets": records}), encoding="utf-8")
        with pytest.raises(DataError) as exc_info:
            load_manifest(path)
        details = exc_info.value.details or ""
        assert "datasets[0] missing required 'file' field" in details
        assert "datasets[1] is not an object" in details

    def test_duplicate_names(self, tmp_path: Path) -> None:
        """Names must be unique ignoring case."""
        record = {
            "name": "A",
            "file": "a.txt",
            "nodes": 2,
            "edges": 1,
            "avg_degree": 1.0,
            "max_degree": 1,
        }
        path = tmp_path / "manifest.json"
        path.write_text(
            json.dumps({"datasets": [record, {**record, "name": "a"}]}),
            encoding="utf-8",
        )
        with pytest.raises(DataError) as exc_info:
            load_manifest(path)
        assert "duplicates name" in (exc_info.value.details or "")

    def test_validate_entry(self) -> None:
        """Field types and ksd ranges are checked."""
        record = {
            "name": "A",
            "file": "a.txt",
            "nodes": True,
            "edges": 1,
            "avg_degree": 1.0,
            "max_degree": 1,
            "ksd_alpha": 1.5,
        }
        errors = validate_entry(record, 3)
        assert "datasets[3].nodes has wrong type bool" in errors
        assert any("ksd_alpha must be in (0, 1)" in e for e in errors)


class TestResolveDataset:
    """Test resolving --dataset values."""

    def test_by_name(self, manifest_dir: Path) -> None:
        manifest = load_manifest(manifest_dir / "manifest.json")
        resolved = resolve_dataset("star", manifest)
        assert resolved.name == "Star"
        assert resolved.path == manifest_dir / "star.txt"
        assert resolved.entry is manifest.get("Star")

    def test_by_path_finds_entry(self, manifest_dir: Path) -> None:
        """A path to a manifest file picks up its entry."""
        manifest = load_manifest(manifest_dir / "manifest.json")
        resolved = resolve_dataset(str(manifest_dir / "star.txt"), manifest)
        assert resolved.name == "Star"
        assert resolved.entry is not None

    def test_unlisted_path(
        self, manifest_dir: Path, write_edge_list: Callable[[str, str], Path]
    ) -> None:
        """Other files are named after their stem and carry no entry."""
        manifest = load_manifest(manifest_dir / "manifest.json")
        path = write_edge_list("a b\n", "other.txt")
        resolved = resolve_dataset(str(path), manifest)
        assert resolved.name == "other"
        assert resolved.entry is None

    def test_unknown(self, manifest_dir: Path) -> None:
        manifest = load_manifest(manifest_dir / "manifest.json")
        with pytest.raises(DatasetNotFoundError) as exc_info:
            resolve_dataset("Nope", manifest)
        assert any("Star" in s for s in exc_info.value.suggestions)

    def test_listed_but_file_missing(self, manifest_dir: Path) -> None:
        """A manifest name whose file is absent reports the expected path."""
        manifest = load_manifest(manifest_dir / "manifest.json")
        (manifest_dir / "star.txt").unlink()
        with pytest.raises(DatasetNotFoundError) as exc_info:
            resolve_dataset("Star", manifest)
        assert exc_info.value.path == manifest_dir / "star.txt"


class TestCheckStats:
    """Test comparing statistics with the manifest."""

    def test_matching(self, manifest_dir: Path, star4: Graph) -> None:
        manifest = load_manifest(manifest_dir / "manifest.json")
        entry = manifest.get("Star")
        assert entry is not None
        check = check_stats(graph_stats(star4), entry)
        assert check.ok
        assert check.name == "Star"

    def test_mismatches(self, manifest_dir: Path, star4: Graph) -> None:
        """Differences are reported per column as (expected, observed)."""
        manifest = load_manifest(manifest_dir / "manifest.json")
        entry = manifest.get("Star")
        assert entry is not None
        changed = replace(entry, nodes=6, avg_degree=1.7, assortativity=0.5)
        check = check_stats(graph_stats(star4), changed)
        assert not check.ok
        assert check.mismatches["nodes"] == (6, 5)
        assert check.mismatches["avg_degree"][0] == 1.7
        assert "assortativity" in check.mismatches
        assert "edges" not in check.mismatches


@pytest.fixture
def dolphins() -> tuple[Graph, DatasetEntry]:
    """The Dolphins network from ``data/``, skipped when the file is absent."""
    manifest = load_manifest(DEFAULT_MANIFEST)
    entry = manifest.get("Dolphins")
    assert entry is not None
    path = manifest.path_of(entry)
    if not path.is_file():
        pytest.skip(f"{path} not present; see data/README.md")
    return read_edge_list(path), entry


@pytest.mark.integration
class TestDolphins:
    """Check the Dolphins edge list against its manifest entry."""

    def test_stats_match_manifest(self, dolphins: tuple[Graph, DatasetEntry]) -> None:
        """62 nodes, 159 edges, <k> = 5.129, max degree 12, r = -0.0436."""
        g, entry = dolphins
        stats = graph_stats(g)
        assert (stats.num_nodes, stats.num_edges, stats.max_degree) == (62, 159, 12)
        assert stats.avg_degree == pytest.approx(5.129, abs=1e-3)
        assert stats.assortativity == pytest.approx(-0.0436, abs=5e-4)
        check = check_stats(stats, entry)
        assert check.ok, check.mismatches

    def test_emh_monotonicity(self, dolphins: tuple[Graph, DatasetEntry]) -> None:
        """EMH separates nearly every node: M = 0.9979."""
        g, entry = dolphins
        value = score_monotonicity(emh_pipeline(g).score_vector("EMH"))
        assert value == pytest.approx(entry.published_monotonicity["EMH"], abs=5e-4)
        assert value == pytest.approx(0.9979, abs=5e-4)
