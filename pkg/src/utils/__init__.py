"""Package initialization for utils module"""
from .logger import setup_logger, get_logger
from .config_loader import ConfigLoader, get_config
from .helpers import (
    format_float,
    geometric_grid,
    linear_fit,
    format_duration,
)

__all__ = [
    'setup_logger',
    'get_logger',
    'ConfigLoader',
    'get_config',
    'format_float',
    'geometric_grid',
    'linear_fit',
    'format_duration',
]
