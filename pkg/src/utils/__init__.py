"""Utilities package for parsing and report export."""

from .text_processing import (
    format_residual,
    parse_scalar,
    parse_param,
    parse_id_list
)
from .export_utils import ExportUtils, render

__all__ = [
    'format_residual',
    'parse_scalar',
    'parse_param',
    'parse_id_list',
    'ExportUtils',
    'render'
]
