"""Byzantine-tolerant gathering of mobile robots on port-labeled graphs.

A deterministic synchronous simulator: anonymous graphs with local port
labels, limited-visibility snapshots, a gathering protocol driven by
view extremes, and adversary strategies that move Byzantine robots and
forge their identifiers.
"""

from .engine import Scenario, run
from .errors import (
    EngineInvariantError,
    GraphError,
    MimicError,
    ScenarioError,
    TraceFormatError,
)
from .graph import PortLabeledGraph, cycle_graph, random_connected_graph

__version__ = "0.1.0"

__all__ = [
    "EngineInvariantError",
    "GraphError",
    "MimicError",
    "PortLabeledGraph",
    "Scenario",
    "ScenarioError",
    "TraceFormatError",
    "cycle_graph",
    "random_connected_graph",
    "run",
    "__version__",
]
