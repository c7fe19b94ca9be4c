"""Tests for the EMH pipeline."""

import itertools
import math
import random
from typing import Callable

import numpy as np
import pytest

from src.emh_rank.emh import (
    EmhParams,
    SVectorStrategy,
    cumulative_centrality,
    cumulative_vector,
    emh_pipeline,
    improved_h_index,
    neighbor_diversity,
)
from src.emh_rank.baselines import h_index
from src.emh_rank.errors import ParameterError
from src.emh_rank.graph import Graph


def weight(j: int, s: float = 0.5, r: float = 10.0) -> float:
    return math.pow(s, 1.0 + j * j / r)


class TestEmhParams:
    """Test parameter validation."""

    def test_defaults(self) -> None:
        """Defaults and the derived third weight."""
        params = EmhParams()
        assert (params.alpha1, params.alpha2) == (0.5, 0.3)
        assert (params.s, params.r) == (0.5, 10.0)
        assert params.alpha3 == pytest.approx(0.2)
        assert params.s_vector_strategy is SVectorStrategy.FULL

    @pytest.mark.parametrize(
        "kwargs",
        [
            {"alpha1": 0.0},
            {"alpha2": 1.0},
            {"alpha1": 0.6, "alpha2": 0.4},
            {"s": 1.0},
            {"s": 0.0},
            {"r": 0.0},
            {"r": -1.0},
        ],
    )
    def test_invalid(self, kwargs: dict[str, float]) -> None:
        """Out-of-range parameters raise ParameterError."""
        with pytest.raises(ParameterError):
            EmhParams(**kwargs)  # type: ignore[arg-type]

    def test_strategy_from_string(self) -> None:
        """Strategies may be given by value."""
        params = EmhParams(s_vector_strategy="prefix")  # type: ignore[arg-type]
        assert params.s_vector_strategy is SVectorStrategy.PREFIX
        with pytest.raises(ParameterError, match="valid: full, distinct, prefix"):
            EmhParams(s_vector_strategy="sorted")  # type: ignore[arg-type]

    def test_position_weights(self) -> None:
        """Weights s^(1 + j^2/r), strictly decreasing."""
        weights = EmhParams().position_weights(4)
        assert weights.tolist() == pytest.approx([weight(j) for j in range(1, 5)])
        assert np.all(np.diff(weights) < 0)


class TestStarGolden:
    """Star with four leaves, default parameters."""

    def test_stages(self, star4: Graph) -> None:
        """Every stage matches values computed by hand."""
        trace = emh_pipeline(star4)
        center = star4.index_of("c")
        leaf = star4.index_of("1")

        assert trace.h.tolist() == [1, 1, 1, 1, 1]
        assert trace.diversity.tolist() == [1, 1, 1, 1, 1]
        assert trace.ih.tolist() == pytest.approx([0.3] * 5)

        mc_center = 0.3 * sum(weight(j) for j in range(1, 5))
        mc_leaf = 0.3 * weight(1)
        imh_center = 4 * mc_leaf
        imh_leaf = mc_center
        assert trace.mc[center] == pytest.approx(mc_center)
        assert trace.mc[leaf] == pytest.approx(mc_leaf)
        assert trace.imh[center] == pytest.approx(imh_center)
        assert trace.imh[leaf] == pytest.approx(imh_leaf)
        assert trace.emh[center] == pytest.approx(imh_center + 4 * imh_leaf)
        assert trace.emh[leaf] == pytest.approx(imh_leaf + imh_center)

    def test_six_decimal_values(self, star4: Graph) -> None:
        """Rounded values as they appear in score files."""
        trace = emh_pipeline(star4)
        center = star4.index_of("c")
        leaf = star4.index_of("1")
        assert trace.mc[center] == pytest.approx(0.383498, abs=1e-6)
        assert trace.mc[leaf] == pytest.approx(0.139955, abs=1e-6)
        assert trace.imh[center] == pytest.approx(0.559820, abs=1e-6)
        assert trace.emh[center] == pytest.approx(2.093811, abs=1e-6)
        assert trace.emh[leaf] == pytest.approx(0.943318, abs=1e-6)


class TestStages:
    """Test individual stages on a triangle with a pendant node."""

    def test_diversity_and_ih(self, triangle_pendant: Graph) -> None:
        """Diversity counts distinct neighbor H-indices; IH weighs neighbors."""
        g = triangle_pendant
        h = h_index(g)
        assert h.as_dict(g) == {"a": 2, "b": 2, "c": 2, "d": 1}
        diversity = neighbor_diversity(g, h)
        by_label = dict(zip(g.labels, diversity.tolist()))
        assert by_label == {"a": 1, "b": 1, "c": 2, "d": 1}
        ih = improved_h_index(g, diversity, EmhParams())
        assert dict(zip(g.labels, ih.tolist())) == pytest.approx(
            {"a": 0.4, "b": 0.4, "c": 0.2, "d": 0.5}
        )

    def test_s_vector_strategies(self, triangle_pendant: Graph) -> None:
        """full, distinct and prefix vectors of the hub node."""
        g = triangle_pendant
        ih = [0.4, 0.4, 0.2, 0.5]
        c = g.index_of("c")
        assert cumulative_vector(g, ih, c) == pytest.approx((0.5, 0.4, 0.4))
        assert cumulative_vector(g, ih, c, SVectorStrategy.DISTINCT) == pytest.approx(
            (0.5, 0.4)
        )
        assert cumulative_vector(g, ih, c, SVectorStrategy.PREFIX) == pytest.approx(
            (0.5, 0.9, 1.3)
        )

    def test_full_vector_length_is_degree(self, karate: Graph) -> None:
        """The full vector has one entry per neighbor, in descending order."""
        trace = emh_pipeline(karate)
        for v in range(karate.node_count):
            vector = trace.s_vectors[v]
            assert len(vector) == karate.degrees[v]
            assert list(vector) == sorted(vector, reverse=True)

    def test_ih_range(self, karate: Graph) -> None:
        """IH is a convex combination of the three weights."""
        params = EmhParams()
        ih = emh_pipeline(karate, params).ih
        low = min(params.alpha1, params.alpha2, params.alpha3)
        high = max(params.alpha1, params.alpha2, params.alpha3)
        assert np.all(ih >= low - 1e-12)
        assert np.all(ih <= high + 1e-12)

    @pytest.mark.parametrize("seed", range(100))
    def test_ih_range_random_graphs(
        self, seed: int, random_graph: Callable[..., Graph]
    ) -> None:
        """With default weights IH lies in [0.2, 0.5] wherever degree >= 1."""
        g = random_graph(seed)
        ih = emh_pipeline(g).ih
        linked = g.degrees > 0
        assert np.all(ih[linked] >= 0.2 - 1e-12)
        assert np.all(ih[linked] <= 0.5 + 1e-12)
        assert np.all(ih[~linked] == 0.0)

    def test_descending_order_maximises_mc(self, karate: Graph) -> None:
        """Decreasing weights make the sorted vector the best arrangement."""
        params = EmhParams()
        trace = emh_pipeline(karate, params)
        rng = random.Random(11)
        for v in (0, 2, 33):
            vector = list(trace.s_vectors[v])
            weights = params.position_weights(len(vector))
            for _ in range(20):
                rng.shuffle(vector)
                assert float(np.dot(weights, vector)) <= trace.mc[v] + 1e-12

    def test_mc_small_permutations(self) -> None:
        """Exhaustive check on a node of degree 4."""
        g = Graph.from_edges([("c", "1"), ("c", "2"), ("c", "3"), ("c", "4")])
        ih = [0.0, 0.1, 0.4, 0.2, 0.3]
        params = EmhParams()
        mc = cumulative_centrality(g, ih, params)
        vector = cumulative_vector(g, ih, 0)
        weights = params.position_weights(4)
        best = max(float(np.dot(weights, p)) for p in itertools.permutations(vector))
        assert mc[0] == pytest.approx(best)


class TestPipelineProperties:
    """Test structural properties of the pipeline."""

    def test_isolated_nodes_score_zero(self) -> None:
        """Isolated nodes are zero at every stage."""
        g = Graph.from_edges([("a", "b"), ("b", "c")], nodes=["z"])
        trace = emh_pipeline(g)
        z = g.index_of("z")
        assert trace.h[z] == 0
        assert trace.diversity[z] == 0
        assert trace.ih[z] == 0.0
        assert trace.s_vectors[z] == ()
        assert trace.mc[z] == trace.imh[z] == trace.emh[z] == 0.0

    @pytest.mark.parametrize("fixture", ["cycle6", "complete5"])
    def test_vertex_transitive_graphs(
        self, fixture: str, request: pytest.FixtureRequest
    ) -> None:
        """Automorphic nodes get identical EMH."""
        g = request.getfixturevalue(fixture)
        emh = emh_pipeline(g).emh
        assert np.allclose(emh, emh[0])

    def test_symmetric_leaves(self, star4: Graph) -> None:
        """The four leaves of a star are interchangeable."""
        emh = emh_pipeline(star4).emh
        leaves = [emh[star4.index_of(label)] for label in "1234"]
        assert max(leaves) - min(leaves) == 0.0

    def test_edge_order_independent(self, karate: Graph) -> None:
        """Scores depend on the graph, not on edge or label order."""
        edges = [(karate.labels[u], karate.labels[v]) for u, v in karate.edges()]
        random.Random(5).shuffle(edges)
        shuffled = Graph.from_edges((b, a) for a, b in edges)
        first = emh_pipeline(karate).score_vector("EMH").as_dict(karate)
        second = emh_pipeline(shuffled).score_vector("EMH").as_dict(shuffled)
        assert second == pytest.approx(first)

    def test_non_negative(self, karate: Graph) -> None:
        """Every stage is non-negative."""
        trace = emh_pipeline(karate)
        for stage in (trace.ih, trace.mc, trace.imh, trace.emh):
            assert np.all(stage >= 0)

    @pytest.mark.parametrize("seed", range(100))
    def test_positive_for_linked_nodes(
        self, seed: int, random_graph: Callable[..., Graph]
    ) -> None:
        """Every node with at least one neighbor has EMH > 0."""
        g = random_graph(seed)
        emh = emh_pipeline(g).emh
        assert np.all(emh[g.degrees > 0] > 0.0)
        assert np.all(emh[g.degrees == 0] == 0.0)


class TestEmhTrace:
    """Test trace accessors."""

    def test_score_vector(self, star4: Graph) -> None:
        """Stages are exposed as named score vectors."""
        trace = emh_pipeline(star4)
        for name in ("HI", "IH", "MC", "IMH", "EMH"):
            assert trace.score_vector(name).measure_name == name
        with pytest.raises(ParameterError):
            trace.score_vector("XYZ")

    def test_record(self, star4: Graph) -> None:
        """Records are JSON friendly and keyed by label."""
        trace = emh_pipeline(star4)
        record = trace.record(star4, star4.index_of("c"))
        assert record["node"] == "c"
        assert record["degree"] == 4
        assert record["s_vector"] == pytest.approx([0.3] * 4)
        assert set(record) == {
            "node",
            "degree",
            "h",
            "diversity",
            "ih",
            "s_vector",
            "mc",
            "imh",
            "emh",
        }
        assert len(trace.to_records(star4)) == 5
        assert len(trace.to_records(star4, [0, 1])) == 2
