"""
Exception hierarchy for the foliation identity engine
"""


class GeometryEngineError(Exception):
    """Base class for every error raised by the engine."""


class OutOfChartError(GeometryEngineError):
    """A point lies outside the chart box shrunk by the margin."""


class JetOrderError(GeometryEngineError):
    """A derivative was requested that the jet no longer carries."""


class JetDivisionError(GeometryEngineError):
    """Division by (or sqrt/log of) a jet whose value is too close to zero."""


class DegenerateMetricError(GeometryEngineError):
    """The metric is singular or not positive definite at a point."""


class FrameError(GeometryEngineError):
    """An orthonormal frame could not be constructed at a point."""


class FormDegreeError(GeometryEngineError):
    """A form operation would exceed the manifold dimension or got bad arity."""


class PreconditionError(GeometryEngineError):
    """An operation was called on input violating its precondition."""


class ModelError(GeometryEngineError):
    """Unknown model, invalid parameters, or a model failing its property table."""


class ConfigError(GeometryEngineError):
    """Invalid run configuration."""


class EvaluationError(GeometryEngineError):
    """Identity evaluation skipped too many points."""
