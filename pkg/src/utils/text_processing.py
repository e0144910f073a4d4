"""
Text processing utilities for parsing flags and formatting numbers
"""

import math
from typing import List, Optional, Tuple

from config.settings import REPORT_CONFIG
from src.errors import ConfigError


def format_residual(value: Optional[float]) -> str:
    """
    Format a residual in scientific notation with 3 significant digits.

    Args:
        value: Residual, or None for identities that were not evaluated

    Returns:
        Formatted string ("-" for None)
    """
    if value is None:
        return "-"
    if math.isnan(value):
        return "nan"
    return REPORT_CONFIG["residual_format"].format(value)


def parse_scalar(text: str):
    """int, then float, then the stripped string."""
    text = text.strip()
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def parse_param(assignment: str) -> Tuple[str, object]:
    """
    Parse one `--param k=v` assignment.

    Raises:
        ConfigError: The assignment has no '=' or an empty key
    """
    key, sep, value = assignment.partition("=")
    key = key.strip()
    if not sep or not key:
        raise ConfigError(f"--param expects key=value, got '{assignment}'")
    return key, parse_scalar(value)


def parse_id_list(text: Optional[str]) -> Optional[List[str]]:
    """Comma separated identity ids; None or 'all' selects the whole catalog."""
    if text is None or text.strip().lower() == "all":
        return None
    ids = [part.strip().upper() for part in text.split(",") if part.strip()]
    if not ids:
        raise ConfigError("empty identity selection")
    return ids
