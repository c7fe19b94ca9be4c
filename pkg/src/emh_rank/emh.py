"""Extended mixing H-index (EMH) centrality.

The pipeline runs, in order:

1. H-index of every node
2. neighbor diversity: number of distinct H-index values among the neighbors
3. improved H-index IH: neighbors classified by diversity relative to the node
4. cumulative vector S(v): neighbor IH values in descending order
5. cumulative centrality ``MC(v) = sum_j s**(1 + j*j/r) * S_j(v)``
6. ``IMH(v)``: sum of neighbor MC
7. ``EMH(v) = IMH(v) + sum of neighbor IMH``

Isolated nodes score 0 at every stage.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from enum import Enum
from typing import Any, Iterable

import numpy as np
import numpy.typing as npt
import structlog

from .baselines import ScoreVector, h_index
from .errors import ParameterError
from .graph import Graph

logger = logging.getLogger(__name__)
structured_logger = structlog.get_logger(__name__)


class SVectorStrategy(str, Enum):
    """How the cumulative vector S(v) is built from neighbor IH values."""

    FULL = "full"
    DISTINCT = "distinct"
    PREFIX = "prefix"


@dataclass(frozen=True)
class EmhParams:
    """Tunable parameters of the EMH pipeline.

    Attributes:
        alpha1: IH weight of neighbors with larger diversity
        alpha2: IH weight of neighbors with equal diversity
        s: Base of the MC position weight, in (0, 1)
        r: Position weight scale, > 0
        s_vector_strategy: Construction of S(v); "full" keeps every neighbor
    """

    alpha1: float = 0.5
    alpha2: float = 0.3
    s: float = 0.5
    r: float = 10.0
    s_vector_strategy: SVectorStrategy = SVectorStrategy.FULL

    def __post_init__(self) -> None:
        for name in ("alpha1", "alpha2", "s"):
            value = getattr(self, name)
            if not 0.0 < value < 1.0:
                raise ParameterError(
                    f"{name} must be strictly between 0 and 1, got {value}"
                )
        if self.alpha1 + self.alpha2 >= 1.0:
            raise ParameterError(
                f"alpha1 + alpha2 must be < 1, got {self.alpha1} + {self.alpha2}"
            )
        if not self.r > 0.0:
            raise ParameterError(f"r must be positive, got {self.r}")
        try:
            strategy = SVectorStrategy(self.s_vector_strategy)
        except ValueError:
            valid = ", ".join(s.value for s in SVectorStrategy)
            raise ParameterError(
                f"unknown S-vector strategy '{self.s_vector_strategy}' (valid: {valid})"
            ) from None
        object.__setattr__(self, "s_vector_strategy", strategy)

    @property
    def alpha3(self) -> float:
        """IH weight of neighbors with smaller diversity."""
        return 1.0 - self.alpha1 - self.alpha2

    def position_weights(self, length: int) -> npt.NDArray[np.float64]:
        """``s ** (1 + j*j/r)`` for j = 1..length."""
        j = np.arange(1, length + 1, dtype=np.float64)
        return np.power(self.s, 1.0 + j * j / self.r)

    def to_dict(self) -> dict[str, Any]:
        return {
            "alpha1": self.alpha1,
            "alpha2": self.alpha2,
            "s": self.s,
            "r": self.r,
            "s_vector_strategy": self.s_vector_strategy.value,
        }


@dataclass(frozen=True, eq=False)
class EmhTrace:
    """All intermediate values of one pipeline run, indexed by dense node index."""

    h: npt.NDArray[np.int64]
    diversity: npt.NDArray[np.int64]
    ih: npt.NDArray[np.float64]
    s_vectors: tuple[tuple[float, ...], ...]
    mc: npt.NDArray[np.float64]
    imh: npt.NDArray[np.float64]
    emh: npt.NDArray[np.float64]

    def score_vector(self, name: str) -> ScoreVector:
        """One stage as a ScoreVector: "HI", "IH", "MC", "IMH" or "EMH"."""
        stages = {
            "HI": self.h,
            "IH": self.ih,
            "MC": self.mc,
            "IMH": self.imh,
            "EMH": self.emh,
        }
        if name not in stages:
            raise ParameterError(
                f"no trace stage '{name}' (stages: {', '.join(stages)})"
            )
        return ScoreVector(name, stages[name].astype(np.float64))

    def record(self, g: Graph, v: int) -> dict[str, Any]:
        """JSON-ready record of node ``v``."""
        return {
            "node": g.label_of(v),
            "degree": int(g.degrees[v]),
            "h": int(self.h[v]),
            "diversity": int(self.diversity[v]),
            "ih": float(self.ih[v]),
            "s_vector": [float(x) for x in self.s_vectors[v]],
            "mc": float(self.mc[v]),
            "imh": float(self.imh[v]),
            "emh": float(self.emh[v]),
        }

    def to_records(
        self, g: Graph, nodes: Iterable[int] | None = None
    ) -> list[dict[str, Any]]:
        """Records for ``nodes`` (all nodes when omitted)."""
        selected = range(g.node_count) if nodes is None else nodes
        return [self.record(g, v) for v in selected]


def _sources(g: Graph) -> npt.NDArray[np.int64]:
    return np.repeat(np.arange(g.node_count, dtype=np.int64), g.degrees)


def neighbor_diversity(g: Graph, h: ScoreVector) -> npt.NDArray[np.int64]:
    """Number of distinct H-index values among each node's neighbors."""
    h.check_graph(g)
    values = h.scores
    out = np.zeros(g.node_count, dtype=np.int64)
    for v, row in enumerate(g.adjacency):
        if row:
            out[v] = len(np.unique(values[list(row)]))
    return out


def improved_h_index(
    g: Graph, diversity: npt.ArrayLike, params: EmhParams
) -> npt.NDArray[np.float64]:
    """IH: degree-normalised weighting of neighbors by relative diversity.

    ``IH(v) = (a1*A1 + a2*A2 + (1-a1-a2)*(D-A1-A2)) / D`` where A1 counts
    neighbors with larger diversity and A2 neighbors with equal diversity.
    """
    div = np.asarray(diversity, dtype=np.int64)
    if len(div) != g.node_count:
        raise ParameterError("diversity must have one value per node")
    src = _sources(g)
    tgt = g.indices
    greater = np.bincount(
        src, weights=(div[tgt] > div[src]).astype(np.float64), minlength=g.node_count
    )
    equal = np.bincount(
        src, weights=(div[tgt] == div[src]).astype(np.float64), minlength=g.node_count
    )
    d = g.degrees.astype(np.float64)

    numerator = (
        params.alpha1 * greater
        + params.alpha2 * equal
        + params.alpha3 * (d - greater - equal)
    )
    ih = np.zeros(g.node_count, dtype=np.float64)
    np.divide(numerator, d, out=ih, where=d > 0)
    return ih


def cumulative_vector(
    g: Graph,
    ih: npt.ArrayLike,
    v: int,
    strategy: SVectorStrategy = SVectorStrategy.FULL,
) -> tuple[float, ...]:
    """S(v): neighbor IH values in descending order.

    Ties keep ascending node-index order so traces are reproducible.

    Args:
        g: Graph
        ih: IH value per node
        v: Node index
        strategy: "full" (every neighbor), "distinct" (distinct values only)
            or "prefix" (running sums of the full vector)
    """
    values = np.asarray(ih, dtype=np.float64)[g.neighbors(v)]
    ordered = values[np.argsort(-values, kind="stable")]
    strategy = SVectorStrategy(strategy)
    if strategy is SVectorStrategy.DISTINCT:
        ordered = np.unique(ordered)[::-1]
    elif strategy is SVectorStrategy.PREFIX:
        ordered = np.cumsum(ordered)
    return tuple(float(x) for x in ordered)


def cumulative_centrality(
    g: Graph,
    ih: npt.ArrayLike,
    params: EmhParams,
    s_vectors: tuple[tuple[float, ...], ...] | None = None,
) -> npt.NDArray[np.float64]:
    """MC: position-weighted sum over the cumulative vector of every node."""
    if s_vectors is None:
        s_vectors = tuple(
            cumulative_vector(g, ih, v, params.s_vector_strategy)
            for v in range(g.node_count)
        )
    mc = np.zeros(g.node_count, dtype=np.float64)
    for v, vector in enumerate(s_vectors):
        if vector:
            weights = params.position_weights(len(vector))
            mc[v] = float(np.dot(weights, np.asarray(vector)))
    return mc


def imh(g: Graph, mc: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """IMH: sum of neighbor MC."""
    values = np.asarray(mc, dtype=np.float64)
    return np.bincount(
        _sources(g), weights=values[g.indices], minlength=g.node_count
    ).astype(np.float64)


def emh(g: Graph, imh_values: npt.ArrayLike) -> npt.NDArray[np.float64]:
    """EMH: own IMH plus the sum of neighbor IMH."""
    values = np.asarray(imh_values, dtype=np.float64)
    return values + np.bincount(
        _sources(g), weights=values[g.indices], minlength=g.node_count
    )


def emh_pipeline(g: Graph, params: EmhParams | None = None) -> EmhTrace:
    """Run every EMH stage and keep the intermediates."""
    params = params or EmhParams()
    started = time.perf_counter()

    h = h_index(g)
    diversity = neighbor_diversity(g, h)
    ih = improved_h_index(g, diversity, params)
    s_vectors = tuple(
        cumulative_vector(g, ih, v, params.s_vector_strategy)
        for v in range(g.node_count)
    )
    mc = cumulative_centrality(g, ih, params, s_vectors)
    imh_values = imh(g, mc)
    emh_values = emh(g, imh_values)

    structured_logger.info(
        "EMH pipeline finished",
        nodes=g.node_count,
        strategy=params.s_vector_strategy.value,
        elapsed_ms=round((time.perf_counter() - started) * 1000, 1),
    )
    return EmhTrace(
        h=h.scores.astype(np.int64),
        diversity=diversity,
        ih=ih,
        s_vectors=s_vectors,
        mc=mc,
        imh=imh_values,
        emh=emh_values,
    )
