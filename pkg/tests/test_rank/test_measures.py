"""Tests for the measure registry."""

import numpy as np
import pytest

from src.emh_rank.baselines import KsdParams, ScoreVector, ksd_centrality
from src.emh_rank.emh import EmhParams, emh_pipeline
from src.emh_rank.errors import UnknownMeasureError
from src.emh_rank.graph import Graph
from src.emh_rank.measures import (
    DEFAULT_TABLE_MEASURES,
    MeasureContext,
    MeasureDef,
    MeasureRegistry,
    registry,
)


class TestMeasureRegistry:
    """Test name resolution and registration."""

    def test_all_measures_registered(self) -> None:
        """Baselines, EMH stages and the default table set are present."""
        names = registry.list_measures()
        for name in ("DC", "KS", "HI", "cn", "cdc", "cks", "G", "IGC", "ksd"):
            assert name in names
        for name in ("IH", "MC", "IMH", "EMH"):
            assert registry.resolve(name).family == "emh"
        assert all(registry.is_registered(name) for name in DEFAULT_TABLE_MEASURES)

    def test_case_insensitive(self) -> None:
        """Lookups ignore case and return the canonical name."""
        assert registry.resolve("emh").name == "EMH"
        assert registry.resolve("CDC").name == "cdc"
        assert registry.get("Igc") is registry.get("IGC")

    def test_unknown_measure(self) -> None:
        """Unknown names raise with close matches suggested."""
        with pytest.raises(UnknownMeasureError) as exc_info:
            registry.resolve("EMG")
        assert exc_info.value.name == "EMG"
        assert any("EMH" in s for s in exc_info.value.suggestions)
        assert registry.get("EMG") is None

    def test_resolve_all_drops_repeats(self) -> None:
        """Order is kept and repeated names collapse."""
        resolved = registry.resolve_all(["emh", "DC", "EMH", "dc"])
        assert [m.name for m in resolved] == ["EMH", "DC"]

    def test_duplicate_registration(self) -> None:
        """Names differing only in case collide."""
        local = MeasureRegistry()
        local.register(MeasureDef("DC", "Degree", lambda c: c.degree))
        with pytest.raises(ValueError, match="already registered"):
            local.register(MeasureDef("dc", "Degree again", lambda c: c.degree))
        assert local.list_measures() == ["DC"]

    def test_measure_def_validation(self) -> None:
        """Empty names and unknown families are rejected."""
        with pytest.raises(ValueError):
            MeasureDef("", "nothing", lambda c: c.degree)
        with pytest.raises(ValueError, match="family"):
            MeasureDef("X", "bad family", lambda c: c.degree, family="other")


class TestCompute:
    """Test computing measures against a shared context."""

    def test_default_measures(self, karate: Graph) -> None:
        """Every default measure scores every node, in request order."""
        vectors = registry.compute(
            list(DEFAULT_TABLE_MEASURES), MeasureContext(graph=karate)
        )
        assert [v.measure_name for v in vectors] == list(DEFAULT_TABLE_MEASURES)
        assert all(len(v) == karate.node_count for v in vectors)

    def test_emh_stages_share_one_trace(self, karate: Graph) -> None:
        """All EMH stages come from the same cached pipeline run."""
        context = MeasureContext(graph=karate)
        vectors = registry.compute(["IH", "MC", "IMH", "EMH"], context)
        assert "trace" in context.__dict__
        expected = emh_pipeline(karate)
        for vector in vectors:
            np.testing.assert_allclose(
                vector.scores, expected.score_vector(vector.measure_name).scores
            )

    def test_context_parameters_are_used(self, triangle_pendant: Graph) -> None:
        """EMH and ksd parameters flow from the context."""
        params = EmhParams(alpha1=0.6, alpha2=0.2)
        ksd = KsdParams(alpha=0.8, mu=0.4)
        context = MeasureContext(
            graph=triangle_pendant, emh_params=params, ksd_params=ksd
        )
        emh, ksd_vector = registry.compute(["EMH", "ksd"], context)
        np.testing.assert_allclose(
            emh.scores, emh_pipeline(triangle_pendant, params).emh
        )
        expected: ScoreVector = ksd_centrality(
            triangle_pendant, context.k_shell, ksd
        )
        np.testing.assert_allclose(ksd_vector.scores, expected.scores)
