"""Registry of the centrality measures exposed by the CLI.

Every measure is a :class:`MeasureDef` whose ``compute`` callable reads a
shared :class:`MeasureContext`, so intermediate results (k-shell, degree, the
EMH trace) are computed once per graph however many measures use them.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import structlog

from . import baselines
from .baselines import (
    DEFAULT_CDC_ALPHA,
    DEFAULT_GRAVITY_RADIUS,
    KsdParams,
    ScoreVector,
)
from .emh import EmhParams, EmhTrace, emh_pipeline
from .errors import UnknownMeasureError
from .graph import Graph

logger = logging.getLogger(__name__)
structured_logger = structlog.get_logger(__name__)

DEFAULT_TABLE_MEASURES = ("cdc", "cks", "cn", "DC", "EMH", "G", "IGC", "ksd")


@dataclass
class MeasureContext:
    """Graph plus parameters, with lazily cached shared intermediates."""

    graph: Graph
    emh_params: EmhParams = field(default_factory=EmhParams)
    ksd_params: KsdParams = field(default_factory=KsdParams)
    cdc_alpha: float = DEFAULT_CDC_ALPHA
    gravity_radius: int = DEFAULT_GRAVITY_RADIUS
    weight_neighborhood_as_printed: bool = False
    n_jobs: int = 1

    @cached_property
    def degree(self) -> ScoreVector:
        return baselines.degree_centrality(self.graph)

    @cached_property
    def k_shell(self) -> ScoreVector:
        return baselines.k_shell(self.graph)

    @cached_property
    def trace(self) -> EmhTrace:
        return emh_pipeline(self.graph, self.emh_params)


@dataclass(frozen=True)
class MeasureDef:
    """One entry of the measure set.

    Attributes:
        name: Canonical measure name (e.g. "cdc", "EMH")
        description: One-line description for ``emh-rank measures``
        compute: Produces the score vector from a context
        family: "baseline" or "emh"
    """

    name: str
    description: str
    compute: Callable[[MeasureContext], ScoreVector]
    family: str = "baseline"

    def __post_init__(self) -> None:
        if not self.name:
            raise ValueError("Measure 'name' must be a non-empty string")
        if self.family not in {"baseline", "emh"}:
            raise ValueError(
                f"Invalid family '{self.family}'. Must be one of: baseline, emh"
            )


class MeasureRegistry:
    """Registry for measure definitions, resolved case-insensitively."""

    def __init__(self) -> None:
        self._measures: dict[str, MeasureDef] = {}

    def register(self, measure: MeasureDef) -> None:
        """Register a measure.

        Raises:
            ValueError: If a measure with the same name (ignoring case) exists
        """
        key = measure.name.lower()
        if key in self._measures:
            raise ValueError(f"Measure '{measure.name}' is already registered")
        self._measures[key] = measure

    def get(self, name: str) -> MeasureDef | None:
        return self._measures.get(name.lower())

    def resolve(self, name: str) -> MeasureDef:
        """Like :meth:`get` but raising :class:`UnknownMeasureError`."""
        measure = self.get(name)
        if measure is None:
            raise UnknownMeasureError(name, self.list_measures())
        return measure

    def resolve_all(self, names: list[str]) -> list[MeasureDef]:
        """Resolve names in order, dropping repeats."""
        resolved: list[MeasureDef] = []
        for name in names:
            measure = self.resolve(name)
            if measure not in resolved:
                resolved.append(measure)
        return resolved

    def list_measures(self) -> list[str]:
        """Canonical names in registration order."""
        return [m.name for m in self._measures.values()]

    def is_registered(self, name: str) -> bool:
        return name.lower() in self._measures

    def compute(self, names: list[str], context: MeasureContext) -> list[ScoreVector]:
        """Compute the named measures against one shared context."""
        results = []
        for measure in self.resolve_all(names):
            started = time.perf_counter()
            results.append(measure.compute(context))
            structured_logger.info(
                "Measure computed",
                measure=measure.name,
                nodes=context.graph.node_count,
                elapsed_ms=round((time.perf_counter() - started) * 1000, 1),
            )
        return results


registry = MeasureRegistry()

for _measure in (
    MeasureDef("DC", "Degree centrality", lambda c: c.degree),
    MeasureDef("KS", "k-shell index (bucket peeling)", lambda c: c.k_shell),
    MeasureDef(
        "HI", "H-index of neighbor degrees", lambda c: baselines.h_index(c.graph)
    ),
    MeasureDef(
        "cn",
        "Neighborhood coreness: sum of neighbor k-shell values",
        lambda c: baselines.neighborhood_coreness(c.graph, c.k_shell),
    ),
    MeasureDef(
        "cdc",
        "Weight neighborhood centrality with degree benchmark",
        lambda c: baselines.weight_neighborhood(
            c.graph, c.degree, c.cdc_alpha, c.weight_neighborhood_as_printed
        ),
    ),
    MeasureDef(
        "cks",
        "Weight neighborhood centrality with k-shell benchmark",
        lambda c: baselines.weight_neighborhood(
            c.graph, c.k_shell, c.cdc_alpha, c.weight_neighborhood_as_printed
        ),
    ),
    MeasureDef(
        "G",
        "Gravity centrality over k-shell masses",
        lambda c: baselines.gravity(c.graph, c.k_shell, c.gravity_radius, c.n_jobs),
    ),
    MeasureDef(
        "IGC",
        "Improved gravity centrality (k-shell source, degree target)",
        lambda c: baselines.improved_gravity(
            c.graph, c.k_shell, c.gravity_radius, c.n_jobs
        ),
    ),
    MeasureDef(
        "ksd",
        "Weighted k-shell degree",
        lambda c: baselines.ksd_centrality(c.graph, c.k_shell, c.ksd_params),
    ),
    MeasureDef(
        "IH",
        "Improved H-index from neighbor diversity",
        lambda c: c.trace.score_vector("IH"),
        family="emh",
    ),
    MeasureDef(
        "MC",
        "Cumulative centrality over the neighbor IH vector",
        lambda c: c.trace.score_vector("MC"),
        family="emh",
    ),
    MeasureDef(
        "IMH",
        "Improved mixing H-index: sum of neighbor MC",
        lambda c: c.trace.score_vector("IMH"),
        family="emh",
    ),
    MeasureDef(
        "EMH",
        "Extended mixing H-index: IMH plus neighbor IMH",
        lambda c: c.trace.score_vector("EMH"),
        family="emh",
    ),
):
    registry.register(_measure)
