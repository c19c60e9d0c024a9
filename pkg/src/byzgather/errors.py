"""Exception types shared across the package."""


class GraphError(ValueError):
    """Malformed graph data: bad ports, asymmetry, self-loops, disconnection."""


class ScenarioError(ValueError):
    """Malformed or inconsistent scenario input, including adversary scripts."""


class TraceFormatError(ValueError):
    """Trace file does not parse as the expected round-record stream."""


class MimicError(RuntimeError):
    """The mimic adversary cannot realize the recorded position in one move."""


class EngineInvariantError(AssertionError):
    """A robot program emitted an action the engine contract forbids."""
