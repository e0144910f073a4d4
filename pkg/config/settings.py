"""
Configuration settings and constants for the foliation identity engine
"""

# Numerical thresholds
NUMERICS = {
    "tolerance": 1e-8,
    "chart_margin": 1e-3,
    "division_floor": 1e-12,
    "gram_schmidt_skip": 1e-9,
    "positive_definite_floor": 1e-9,
    "vacuous_floor": 1e-12,
    "symmetry_tolerance": 1e-12,
}

# Point sampling and argument families
SAMPLING = {
    "seed": 42,
    "points": 100,
    "predicate_points": 50,
    "validation_points": 6,
    "trials": 8,
    "max_skip_fraction": 0.2,
}

# Quadrature for the integral identity
QUADRATURE = {
    "resolution": 64,
}

# Per-model default parameters
MODEL_DEFAULTS = {
    "flat_torus_flow": {},
    "hopf_s3": {},
    "horosphere": {"p": 2},
    "conformal_torus": {"amplitude": 1.0},
    "twisted_flow": {"psi_z": 1.0, "psi_xz": 1.0, "twist": 1.0, "warp": 0.5},
}

# Command line defaults
CLI_DEFAULTS = {
    "model": "hopf_s3",
    "format": "text",
    "formats": ("text", "json", "markdown"),
    "ids": "all",
}

# Report serialization
REPORT_CONFIG = {
    "json_indent": 2,
    "residual_format": "{:.2e}",
    "tool_name": "foliation-verify",
    "extensions": {"text": "txt", "json": "json", "markdown": "md"},
}

# Logging
LOGGING_CONFIG = {
    "level": "WARNING",
    "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
}
