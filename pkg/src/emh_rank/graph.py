"""Immutable undirected graph, edge-list ingestion and topology statistics.

Graphs use a compact CSR layout (``indptr`` / ``indices`` arrays) with each
neighbor list sorted ascending. Node labels are kept as strings exactly as
they appear in the input; dense indices follow first appearance.
"""

from __future__ import annotations

import logging
import re
import warnings
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable, Iterator

import networkx as nx
import numpy as np
import numpy.typing as npt
import structlog

from .errors import (
    DataError,
    DatasetNotFoundError,
    EdgeListParseError,
    UnknownNodeError,
)
from .file_utils import read_file

logger = logging.getLogger(__name__)
structured_logger = structlog.get_logger(__name__)

UNREACHABLE = -1

_TOKEN_SPLIT = re.compile(r"[\s,]+")
_BOM = "\ufeff"


class EdgeListWarning(UserWarning):
    """Issued when input edges are dropped during parsing."""


@dataclass(frozen=True)
class ParseOptions:
    """Options for edge-list parsing.

    Attributes:
        comment_prefixes: Line prefixes that mark comments
        source: Name of the input used in error messages
    """

    comment_prefixes: tuple[str, ...] = ("#", "%")
    source: str | None = None


@dataclass(frozen=True, eq=False)
class Graph:
    """Immutable undirected simple graph.

    Attributes:
        indptr: CSR row pointer, length ``node_count + 1``
        indices: Concatenated sorted neighbor lists
        labels: Original label of every dense index
    """

    indptr: npt.NDArray[np.int64]
    indices: npt.NDArray[np.int64]
    labels: tuple[str, ...]
    _index: dict[str, int] = field(repr=False, default_factory=dict)

    def __post_init__(self) -> None:
        if len(self.indptr) != len(self.labels) + 1:
            raise ValueError("indptr length must be node_count + 1")
        if not self._index:
            object.__setattr__(
                self, "_index", {label: i for i, label in enumerate(self.labels)}
            )
        if len(self._index) != len(self.labels):
            raise ValueError("node labels must be unique")
        self.indptr.setflags(write=False)
        self.indices.setflags(write=False)

    @classmethod
    def from_edges(
        cls, edges: Iterable[tuple[str, str]], nodes: Iterable[str] = ()
    ) -> Graph:
        """Build a graph from label pairs.

        Self-loops and duplicate edges are ignored. Labels get dense indices in
        order of first appearance, ``nodes`` first.

        Args:
            edges: (source, target) label pairs
            nodes: Extra labels to include even if they have no edges

        Returns:
            The graph
        """
        graph, _, _ = _build(edges, nodes)
        return graph

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def edge_count(self) -> int:
        return len(self.indices) // 2

    @cached_property
    def degrees(self) -> npt.NDArray[np.int64]:
        """Degree of every node."""
        values = np.diff(self.indptr)
        values.setflags(write=False)
        return values

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        """Neighbor lists as Python tuples, for per-node loops."""
        flat = self.indices.tolist()
        bounds = self.indptr.tolist()
        return tuple(
            tuple(flat[bounds[v] : bounds[v + 1]]) for v in range(self.node_count)
        )

    def neighbors(self, v: int) -> npt.NDArray[np.int64]:
        """Sorted neighbor indices of ``v``."""
        self._check_index(v)
        return self.indices[self.indptr[v] : self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        self._check_index(u)
        self._check_index(v)
        row = self.neighbors(u)
        pos = int(np.searchsorted(row, v))
        return pos < len(row) and int(row[pos]) == v

    def edges(self) -> Iterator[tuple[int, int]]:
        """Iterate each undirected edge once as ``(u, v)`` with ``u < v``."""
        for u, row in enumerate(self.adjacency):
            for v in row:
                if u < v:
                    yield u, v

    def index_of(self, label: str) -> int:
        """Dense index of a label.

        Raises:
            UnknownNodeError: If the label is not present
        """
        try:
            return self._index[label]
        except KeyError:
            raise UnknownNodeError(label, self.labels) from None

    def label_of(self, v: int) -> str:
        self._check_index(v)
        return self.labels[v]

    @cached_property
    def component_ids(self) -> npt.NDArray[np.int64]:
        """Connected-component id of every node (ids in order of lowest node)."""
        comp = np.full(self.node_count, -1, dtype=np.int64)
        current = 0
        for start in range(self.node_count):
            if comp[start] >= 0:
                continue
            comp[start] = current
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for w in self.adjacency[u]:
                    if comp[w] < 0:
                        comp[w] = current
                        queue.append(w)
            current += 1
        comp.setflags(write=False)
        return comp

    def component_sizes(self) -> npt.NDArray[np.int64]:
        """Size of the connected component containing each node."""
        counts = np.bincount(self.component_ids)
        return counts[self.component_ids]

    def to_networkx(self) -> nx.Graph:
        """Convert to networkx; nodes are dense indices with a ``label`` attribute."""
        g = nx.Graph()
        g.add_nodes_from(
            (i, {"label": label}) for i, label in enumerate(self.labels)
        )
        g.add_edges_from(self.edges())
        return g

    def _check_index(self, v: int) -> None:
        if not 0 <= v < self.node_count:
            raise IndexError(
                f"node index {v} out of range for graph with {self.node_count} nodes"
            )


@dataclass(frozen=True)
class GraphStats:
    """Dataset statistics in the layout of the dataset summary table."""

    num_nodes: int
    num_edges: int
    avg_degree: float
    max_degree: int
    assortativity: float | None

    def format_row(self) -> str:
        """Render ``|V| |E| avg max assortativity``, e.g. ``62 159 5.129 12 -0.0436``"""
        assort = (
            "<undefined>" if self.assortativity is None else f"{self.assortativity:.4f}"
        )
        return (
            f"{self.num_nodes} {self.num_edges} {self.avg_degree:.3f} "
            f"{self.max_degree} {assort}"
        )

    def to_dict(self) -> dict[str, float | int | None]:
        return {
            "nodes": self.num_nodes,
            "edges": self.num_edges,
            "avg_degree": self.avg_degree,
            "max_degree": self.max_degree,
            "assortativity": self.assortativity,
        }


def _build(
    edges: Iterable[tuple[str, str]], nodes: Iterable[str] = ()
) -> tuple[Graph, int, int]:
    index: dict[str, int] = {}
    labels: list[str] = []

    def intern(label: str) -> int:
        idx = index.get(label)
        if idx is None:
            idx = len(labels)
            index[label] = idx
            labels.append(label)
        return idx

    for label in nodes:
        intern(label)

    seen: set[tuple[int, int]] = set()
    self_loops = 0
    duplicates = 0
    for a, b in edges:
        u, v = intern(a), intern(b)
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if u < v else (v, u)
        if key in seen:
            duplicates += 1
            continue
        seen.add(key)

    n = len(labels)
    if seen:
        pairs = np.array(sorted(seen), dtype=np.int64)
        src = np.concatenate([pairs[:, 0], pairs[:, 1]])
        dst = np.concatenate([pairs[:, 1], pairs[:, 0]])
    else:
        src = np.empty(0, dtype=np.int64)
        dst = np.empty(0, dtype=np.int64)

    order = np.lexsort((dst, src))
    indices = dst[order].astype(np.int64)
    indptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])

    graph = Graph(indptr=indptr, indices=indices, labels=tuple(labels), _index=index)
    return graph, self_loops, duplicates


def parse_edge_list(text: str, options: ParseOptions | None = None) -> Graph:
    """Parse an edge list into a graph.

    Each data line holds two labels separated by whitespace or a comma.
    Blank lines and lines starting with a comment prefix are skipped.
    Duplicate edges and self-loops are dropped and reported through an
    :class:`EdgeListWarning`.

    Args:
        text: Edge-list content
        options: Parse options

    Returns:
        The parsed graph

    Raises:
        EdgeListParseError: On a malformed line or when no edges are found
    """
    options = options or ParseOptions()
    pairs: list[tuple[str, str]] = []
    text = text.removeprefix(_BOM)

    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(options.comment_prefixes):
            continue
        tokens = [t for t in _TOKEN_SPLIT.split(line) if t]
        if len(tokens) != 2:
            raise EdgeListParseError(
                f"expected 2 tokens, found {len(tokens)}",
                line_number=line_number,
                line=raw,
                source=options.source,
            )
        pairs.append((tokens[0], tokens[1]))

    graph, self_loops, duplicates = _build(pairs)
    if graph.edge_count == 0:
        raise EdgeListParseError("no edges", source=options.source)

    if self_loops or duplicates:
        structured_logger.warning(
            "Dropped edges while parsing",
            source=options.source,
            self_loops=self_loops,
            duplicates=duplicates,
        )
        warnings.warn(
            f"{options.source or '<input>'}: dropped {duplicates} duplicate edge(s) "
            f"and {self_loops} self-loop(s)",
            EdgeListWarning,
            stacklevel=2,
        )

    logger.debug(
        f"Parsed {graph.node_count} nodes and {graph.edge_count} edges "
        f"from {options.source or '<input>'}"
    )
    return graph


def read_edge_list(path: Path, options: ParseOptions | None = None) -> Graph:
    """Read and parse an edge-list file.

    Raises:
        DatasetNotFoundError: If the file does not exist
        EdgeListParseError: On malformed content
    """
    if not path.is_file():
        raise DatasetNotFoundError(path)
    options = options or ParseOptions()
    if options.source is None:
        options = ParseOptions(options.comment_prefixes, source=str(path))
    return parse_edge_list(read_file(path), options)


def degree(g: Graph, v: int) -> int:
    """Number of neighbors of ``v``."""
    g._check_index(v)  # pylint: disable=protected-access
    return int(g.indptr[v + 1] - g.indptr[v])


def bfs_distances(
    g: Graph, source: int, max_depth: int | None = None
) -> npt.NDArray[np.int64]:
    """Hop distances from ``source``.

    Args:
        g: Graph
        source: Start node index
        max_depth: Stop expanding beyond this many hops; ``None`` for unbounded

    Returns:
        Distance per node, ``UNREACHABLE`` for nodes not reached
    """
    g._check_index(source)  # pylint: disable=protected-access
    dist = np.full(g.node_count, UNREACHABLE, dtype=np.int64)
    dist[source] = 0
    adjacency = g.adjacency
    frontier = [source]
    depth = 0
    while frontier and (max_depth is None or depth < max_depth):
        depth += 1
        nxt = []
        for u in frontier:
            for w in adjacency[u]:
                if dist[w] == UNREACHABLE:
                    dist[w] = depth
                    nxt.append(w)
        frontier = nxt
    return dist


def bfs_layers(g: Graph, source: int, max_depth: int) -> list[list[int]]:
    """Nodes at distance 1..max_depth from ``source``, one list per layer."""
    dist = bfs_distances(g, source, max_depth)
    layers: list[list[int]] = [[] for _ in range(max_depth)]
    for v in np.flatnonzero(dist > 0).tolist():
        layers[int(dist[v]) - 1].append(v)
    return layers


def degree_assortativity(g: Graph) -> float | None:
    """Pearson correlation of endpoint degrees over both orientations of every edge.

    Returns:
        The coefficient, or ``None`` when endpoint degrees have zero variance
    """
    if g.edge_count == 0:
        return None
    deg = g.degrees.astype(np.float64)
    src = np.repeat(np.arange(g.node_count), g.degrees)
    x = deg[src]
    y = deg[g.indices]
    x_centered = x - x.mean()
    y_centered = y - y.mean()
    denom = np.sqrt(np.dot(x_centered, x_centered) * np.dot(y_centered, y_centered))
    # integer degrees: an exactly regular edge set gives denom == 0
    if denom <= 1e-12 * len(x):
        return None
    return float(np.dot(x_centered, y_centered) / denom)


def graph_stats(g: Graph) -> GraphStats:
    """Summary statistics of a graph.

    Raises:
        DataError: If the graph has fewer than 2 nodes or no edges
    """
    if g.node_count < 2 or g.edge_count < 1:
        raise DataError(
            "graph statistics need at least 2 nodes and 1 edge",
            details=f"nodes={g.node_count}, edges={g.edge_count}",
        )
    return GraphStats(
        num_nodes=g.node_count,
        num_edges=g.edge_count,
        avg_degree=2.0 * g.edge_count / g.node_count,
        max_degree=int(g.degrees.max()),
        assortativity=degree_assortativity(g),
    )
