"""Services package for identity evaluation."""

from .identity_catalog import CATALOG, get_identity, identity_ids
from .identity_suite import (
    ResidualReport,
    contact_classify,
    cor26_verdict,
    evaluate_identity,
    integral_check_136,
    run_catalog
)

__all__ = [
    'CATALOG',
    'get_identity',
    'identity_ids',
    'ResidualReport',
    'contact_classify',
    'cor26_verdict',
    'evaluate_identity',
    'integral_check_136',
    'run_catalog'
]
