"""Riemannian and foliated geometry on a chart."""
