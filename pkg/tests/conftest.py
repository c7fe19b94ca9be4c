"""Global pytest fixtures: small graphs with known centrality values.

Graphs are built from label pairs so tests read like the edge lists they
describe. Output files go to ``tmp_path`` only.
"""

import json
import random
from pathlib import Path
from typing import Any, Callable, Generator

import pytest

from src.emh_rank.graph import Graph


def make_graph(edges: str) -> Graph:
    """Graph from ``"a-b b-c"`` style shorthand."""
    pairs = [tuple(token.split("-")) for token in edges.split()]
    return Graph.from_edges((a, b) for a, b in pairs)


@pytest.fixture
def star4() -> Graph:
    """Star with center c and leaves 1..4."""
    return make_graph("c-1 c-2 c-3 c-4")


@pytest.fixture
def path3() -> Graph:
    """Path a - b - c."""
    return make_graph("a-b b-c")


@pytest.fixture
def path5() -> Graph:
    return make_graph("1-2 2-3 3-4 4-5")


@pytest.fixture
def cycle6() -> Graph:
    return make_graph("0-1 1-2 2-3 3-4 4-5 5-0")


@pytest.fixture
def complete5() -> Graph:
    labels = "abcde"
    return Graph.from_edges(
        (labels[i], labels[j]) for i in range(5) for j in range(i + 1, 5)
    )


@pytest.fixture
def triangle_pendant() -> Graph:
    """Triangle a b c with pendant d attached to c."""
    return make_graph("a-b b-c c-a c-d")


@pytest.fixture
def karate() -> Graph:
    """Zachary's karate club (34 nodes, 78 edges) from networkx."""
    nx = pytest.importorskip("networkx")
    g = nx.karate_club_graph()
    return Graph.from_edges((str(u), str(v)) for u, v in g.edges())


@pytest.fixture
def random_graph() -> Callable[..., Graph]:
    """Seeded G(n, p) graphs whose size and mean degree vary with the seed.

    Isolated nodes are kept. Labels are the networkx node numbers.
    """
    nx = pytest.importorskip("networkx")

    def _build(seed: int, max_nodes: int = 200) -> Graph:
        rng = random.Random(seed)
        n = rng.randint(10, max_nodes)
        p = min(1.0, rng.uniform(0.5, 8.0) / (n - 1))
        h = nx.gnp_random_graph(n, p, seed=seed)
        return Graph.from_edges(
            ((str(u), str(v)) for u, v in h.edges()),
            nodes=[str(v) for v in h.nodes()],
        )

    return _build


@pytest.fixture
def write_edge_list(tmp_path: Path) -> Callable[[str, str], Path]:
    """Write edge-list text to a file under tmp_path and return its path."""

    def _write(text: str, name: str = "graph.txt") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write


@pytest.fixture
def manifest_dir(tmp_path: Path) -> Generator[Path, None, None]:
    """A data directory with a one-entry manifest and its edge list (a star)."""
    data = tmp_path / "data"
    data.mkdir()
    (data / "star.txt").write_text("c 1\nc 2\nc 3\nc 4\n", encoding="utf-8")
    entry: dict[str, Any] = {
        "name": "Star",
        "file": "star.txt",
        "nodes": 5,
        "edges": 4,
        "avg_degree": 1.6,
        "max_degree": 4,
        "ksd_alpha": 0.8,
        "ksd_mu": 0.4,
        "assortativity": None,
        "source": "test fixture",
        "source_url": None,
        "published_avg_tau": {"EMH": 0.5},
        "published_monotonicity": {"EMH": 0.16},
    }
    (data / "manifest.json").write_text(
        json.dumps({"datasets": [entry]}), encoding="utf-8"
    )
    yield data
