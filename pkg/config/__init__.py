"""Configuration package for the foliation identity engine."""

from .settings import (
    NUMERICS,
    SAMPLING,
    QUADRATURE,
    MODEL_DEFAULTS,
    CLI_DEFAULTS,
    REPORT_CONFIG,
    LOGGING_CONFIG
)

__all__ = [
    'NUMERICS',
    'SAMPLING',
    'QUADRATURE',
    'MODEL_DEFAULTS',
    'CLI_DEFAULTS',
    'REPORT_CONFIG',
    'LOGGING_CONFIG'
]
