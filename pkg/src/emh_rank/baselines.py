"""Baseline centrality measures.

Degree (DC), k-shell (KS), H-index (HI), neighborhood coreness (cn), weight
neighborhood centrality with degree or k-shell benchmark (cdc / cks), gravity
(G), improved gravity (IGC) and the weighted k-shell degree (ksd).

All functions are pure: they read an immutable :class:`Graph` (and possibly a
precomputed :class:`ScoreVector`) and return a new ScoreVector.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any

import numpy as np
import numpy.typing as npt
from joblib import Parallel, delayed

from .errors import DataError, ParameterError
from .graph import Graph, bfs_distances

logger = logging.getLogger(__name__)

DEFAULT_GRAVITY_RADIUS = 3
DEFAULT_CDC_ALPHA = 0.5


@dataclass(frozen=True, eq=False)
class ScoreVector:
    """Per-node scores produced by one measure.

    Attributes:
        measure_name: Name of the producing measure (e.g. "DC", "EMH")
        scores: float64 score per dense node index
    """

    measure_name: str
    scores: npt.NDArray[np.float64]

    def __post_init__(self) -> None:
        values = np.asarray(self.scores, dtype=np.float64)
        if values.ndim != 1:
            raise ParameterError(f"{self.measure_name}: scores must be one-dimensional")
        if not np.all(np.isfinite(values)):
            raise ParameterError(f"{self.measure_name}: scores must all be finite")
        values = values.copy()
        values.setflags(write=False)
        object.__setattr__(self, "scores", values)

    def __len__(self) -> int:
        return len(self.scores)

    def check_graph(self, g: Graph) -> None:
        """Raise ParameterError unless the vector scores every node of ``g``."""
        if len(self.scores) != g.node_count:
            raise ParameterError(
                f"{self.measure_name}: {len(self.scores)} scores for a graph "
                f"with {g.node_count} nodes"
            )

    def top(self, k: int) -> list[int]:
        """Indices of the ``k`` highest-scoring nodes (ties by lower index)."""
        order = np.lexsort((np.arange(len(self.scores)), -self.scores))
        return [int(i) for i in order[:k]]

    def as_dict(self, g: Graph) -> dict[str, float]:
        """Scores keyed by node label."""
        self.check_graph(g)
        return {label: float(s) for label, s in zip(g.labels, self.scores)}


@dataclass(frozen=True)
class KsdParams:
    """Edge-weight parameters of the weighted k-shell degree measure."""

    alpha: float = 0.9
    mu: float = 0.2

    def __post_init__(self) -> None:
        for name, value in (("alpha", self.alpha), ("mu", self.mu)):
            if not 0.0 < value < 1.0:
                raise ParameterError(
                    f"ksd {name} must be strictly between 0 and 1, got {value}"
                )


def _edge_sources(g: Graph) -> npt.NDArray[np.int64]:
    """Source index of every oriented CSR entry."""
    return np.repeat(np.arange(g.node_count, dtype=np.int64), g.degrees)


def _neighbor_sum(g: Graph, values: npt.NDArray[np.float64]) -> npt.NDArray[np.float64]:
    """Sum of ``values`` over each node's neighbors."""
    return np.bincount(
        _edge_sources(g), weights=values[g.indices], minlength=g.node_count
    ).astype(np.float64)


def degree_centrality(g: Graph) -> ScoreVector:
    """DC: the degree of each node."""
    return ScoreVector("DC", g.degrees.astype(np.float64))


def k_shell(g: Graph) -> ScoreVector:
    """KS: k-shell index of every node.

    Bucket-based peeling in O(|V| + |E|); the result equals repeatedly
    removing all nodes of residual degree <= k for k = 1, 2, ... Isolated
    nodes get shell 0.
    """
    n = g.node_count
    deg = g.degrees.tolist()
    if n == 0:
        return ScoreVector("KS", np.zeros(0))

    adjacency = g.adjacency
    max_deg = max(deg)
    bins = [0] * (max_deg + 1)
    for d in deg:
        bins[d] += 1
    start = 0
    for d in range(max_deg + 1):
        count = bins[d]
        bins[d] = start
        start += count

    pos = [0] * n
    vert = [0] * n
    for v in range(n):
        pos[v] = bins[deg[v]]
        vert[pos[v]] = v
        bins[deg[v]] += 1
    for d in range(max_deg, 0, -1):
        bins[d] = bins[d - 1]
    bins[0] = 0

    for i in range(n):
        v = vert[i]
        for u in adjacency[v]:
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bins[du]
                w = vert[pw]
                if u != w:
                    pos[u], pos[w] = pw, pu
                    vert[pu], vert[pw] = w, u
                bins[du] += 1
                deg[u] -= 1

    return ScoreVector("KS", np.asarray(deg, dtype=np.float64))


def h_index(g: Graph) -> ScoreVector:
    """HI: largest h such that at least h neighbors have degree >= h."""
    degrees = g.degrees
    scores = np.zeros(g.node_count, dtype=np.float64)
    for v in range(g.node_count):
        nbr_deg = np.sort(degrees[g.indices[g.indptr[v] : g.indptr[v + 1]]])[::-1]
        # descending values against increasing positions: the test flips once
        scores[v] = np.count_nonzero(nbr_deg >= np.arange(1, len(nbr_deg) + 1))
    return ScoreVector("HI", scores)


def neighborhood_coreness(g: Graph, ks: ScoreVector) -> ScoreVector:
    """cn: sum of neighbors' k-shell values."""
    ks.check_graph(g)
    return ScoreVector("cn", _neighbor_sum(g, ks.scores))


def weight_neighborhood(
    g: Graph,
    benchmark: ScoreVector,
    alpha: float = DEFAULT_CDC_ALPHA,
    as_printed: bool = False,
) -> ScoreVector:
    """Weight neighborhood centrality over a benchmark measure.

    ``score_i = phi_i + sum_j (A_ij / <A>) * phi_j`` with
    ``A_ij = (k_i * k_j) ** alpha`` and ``<A>`` the mean over edges. With a
    DC benchmark the result is named "cdc", with KS "cks".

    Args:
        g: Graph
        benchmark: DC or KS scores
        alpha: Edge weight exponent in (0, 1)
        as_printed: Multiply by ``phi_i`` inside the sum instead of ``phi_j``

    Raises:
        DataError: If the graph has no edges
        ParameterError: If alpha is outside (0, 1)
    """
    if not 0.0 < alpha < 1.0:
        raise ParameterError(
            f"weight neighborhood alpha must be in (0, 1), got {alpha}"
        )
    benchmark.check_graph(g)
    if g.edge_count == 0:
        raise DataError("weight neighborhood centrality needs at least one edge")

    src = _edge_sources(g)
    deg = g.degrees.astype(np.float64)
    weights = (deg[src] * deg[g.indices]) ** alpha
    # each edge appears twice, so this equals the mean over unordered edges
    ratio = weights / weights.mean()
    phi = benchmark.scores
    factor = phi[src] if as_printed else phi[g.indices]
    sums = np.bincount(src, weights=ratio * factor, minlength=g.node_count)

    name = {"DC": "cdc", "KS": "cks"}.get(
        benchmark.measure_name, f"wn_{benchmark.measure_name}"
    )
    return ScoreVector(name, phi + sums)


def _gravity_chunk(
    g: Graph,
    nodes: list[int],
    source_mass: npt.NDArray[np.float64],
    target_mass: npt.NDArray[np.float64],
    radius: int,
) -> list[float]:
    out = []
    for i in nodes:
        dist = bfs_distances(g, i, radius)
        mask = dist > 0
        d = dist[mask].astype(np.float64)
        out.append(float(source_mass[i] * np.sum(target_mass[mask] / (d * d))))
    return out


def _gravity_scores(
    g: Graph,
    source_mass: npt.NDArray[np.float64],
    target_mass: npt.NDArray[np.float64],
    radius: int,
    n_jobs: int,
) -> npt.NDArray[np.float64]:
    if radius < 1:
        raise ParameterError(f"gravity radius must be >= 1, got {radius}")
    nodes = list(range(g.node_count))
    if n_jobs == 1 or g.node_count < 2:
        return np.asarray(
            _gravity_chunk(g, nodes, source_mass, target_mass, radius), dtype=np.float64
        )

    chunk_count = max(1, min(g.node_count, 4 * abs(n_jobs)))
    chunks = [c.tolist() for c in np.array_split(np.asarray(nodes), chunk_count)]
    results: list[Any] = Parallel(n_jobs=n_jobs)(
        delayed(_gravity_chunk)(g, chunk, source_mass, target_mass, radius)
        for chunk in chunks
    )
    return np.asarray([s for part in results for s in part], dtype=np.float64)


def gravity(
    g: Graph, ks: ScoreVector, radius: int = DEFAULT_GRAVITY_RADIUS, n_jobs: int = 1
) -> ScoreVector:
    """G: ``sum_{0 < d_ij <= radius} ks_i * ks_j / d_ij**2``."""
    ks.check_graph(g)
    return ScoreVector("G", _gravity_scores(g, ks.scores, ks.scores, radius, n_jobs))


def improved_gravity(
    g: Graph, ks: ScoreVector, radius: int = DEFAULT_GRAVITY_RADIUS, n_jobs: int = 1
) -> ScoreVector:
    """IGC: ``sum_{0 < d_ij <= radius} ks_i * k_j / d_ij**2``."""
    ks.check_graph(g)
    degrees = g.degrees.astype(np.float64)
    return ScoreVector("IGC", _gravity_scores(g, ks.scores, degrees, radius, n_jobs))


def ksd_centrality(g: Graph, ks: ScoreVector, params: KsdParams) -> ScoreVector:
    """ksd: sum over neighbors of ``(a*d_i + mu*core_i) * (a*d_j + mu*core_j)``."""
    ks.check_graph(g)
    strength = params.alpha * g.degrees.astype(np.float64) + params.mu * ks.scores
    return ScoreVector("ksd", strength * _neighbor_sum(g, strength))
