"""Exception types shared across the package."""


class CrossBenchError(Exception):
    """Base class for all errors raised by this package."""


class SchemaError(CrossBenchError):
    """An input document (topology, gate set, noise model, counts) is malformed."""


class InsufficientTopologyError(CrossBenchError):
    """The device cannot host even one driver group with an adjacent spectator."""


class InvalidThresholdError(CrossBenchError):
    """A placement threshold is negative."""


class EmissionError(CrossBenchError):
    """A circuit cannot be rendered to text (e.g. a gate has no emit name)."""


class AnalysisError(CrossBenchError):
    """Counts or tables are inconsistent with each other or with metadata."""
