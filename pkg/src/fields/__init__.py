"""Second-order jets and smooth fields on a coordinate chart."""

from .smooth_fields import ChartDomain, ChartPoint, Jet2, ScalarField, VectorField

__all__ = ['ChartDomain', 'ChartPoint', 'Jet2', 'ScalarField', 'VectorField']
