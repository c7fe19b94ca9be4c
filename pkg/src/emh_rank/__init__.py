"""emh-rank - EMH centrality, baseline measures and SIR-based evaluation."""

import logging

from .baselines import KsdParams, ScoreVector
from .emh import EmhParams, EmhTrace, emh_pipeline
from .graph import Graph, parse_edge_list, read_edge_list
from .measures import registry
from .sir import SirConfig, spreading_capability

# Version is automatically determined from git tags via setuptools-scm
try:
    from importlib.metadata import version

    __version__ = version("emh-rank")
except Exception:  # pylint: disable=broad-exception-caught
    # Fallback for development/editable installs without proper metadata
    __version__ = "0.0.0.dev0+unknown"

logger = logging.getLogger(__name__)

__all__ = [
    "EmhParams",
    "EmhTrace",
    "Graph",
    "KsdParams",
    "ScoreVector",
    "SirConfig",
    "emh_pipeline",
    "parse_edge_list",
    "read_edge_list",
    "registry",
    "spreading_capability",
]
