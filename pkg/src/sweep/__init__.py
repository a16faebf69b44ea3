"""Package initialization for sweep module"""
from .schemas import SweepConfig, GridSpec, OracleSpec, NMaxRule, PhysicalInputsSpec, parse_config, parse_config_data
from .manager import SweepManager
from .validation import run_validation

__all__ = [
    'SweepConfig',
    'GridSpec',
    'OracleSpec',
    'NMaxRule',
    'PhysicalInputsSpec',
    'parse_config',
    'parse_config_data',
    'SweepManager',
    'run_validation',
]
