"""
Helper Utilities

Common utility functions used across the toolkit.
"""

import math
from typing import Sequence

import numpy as np


def format_float(value: float) -> str:
    """
    Format a float for CSV output

    17 significant digits round-trip every double; non-finite values become
    ``nan``/``inf``/``-inf`` and negative zero is written as ``0``.

    Args:
        value: Number to format

    Returns:
        Formatted string
    """
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    if value == 0.0:
        return "0"
    return format(value, '.17g')


def geometric_grid(lower: float, upper: float, points: int) -> np.ndarray:
    """
    Geometrically spaced grid including both ends

    Args:
        lower: Smallest value (> 0)
        upper: Largest value
        points: Number of points

    Returns:
        Array of grid values
    """
    if not 0 < lower < upper:
        raise ValueError("geometric grid needs 0 < lower < upper")
    return np.geomspace(lower, upper, points)


def linear_fit(x: Sequence[float], values: Sequence[float]) -> tuple:
    """
    Least-squares straight line

    Args:
        x: Abscissae
        values: Ordinates

    Returns:
        (slope, intercept)
    """
    slope, intercept = np.polyfit(np.asarray(x, dtype=float), np.asarray(values, dtype=float), 1)
    return float(slope), float(intercept)


def format_duration(seconds: float) -> str:
    """
    Format duration in seconds to human-readable string

    Args:
        seconds: Duration in seconds

    Returns:
        Formatted duration string
    """
    if seconds < 60:
        return f"{seconds:.2f}s"
    elif seconds < 3600:
        minutes = int(seconds // 60)
        secs = seconds % 60
        return f"{minutes}m {secs:.0f}s"
    else:
        hours = int(seconds // 3600)
        minutes = int((seconds % 3600) // 60)
        return f"{hours}h {minutes}m"
