"""Package initialization for data module"""
from .models import (
    Phase,
    ModeKind,
    ModeFamily,
    PointFlag,
    PhysicalInputs,
    ReducedParams,
    MeanFieldSolution,
    QuadraticCoeffs,
    NormalModeSpectrum,
    NormalMode,
    ModeDecomposition,
    GroundStateStats,
    DiffusionRates,
    SpinPhotonBasis,
    EDResult,
    FiniteSizeScan,
    SweepPoint,
    CheckResult,
    SWEEP_COLUMNS,
    ORACLE_COLUMNS,
)
from .errors import (
    DickeModelError,
    ConfigurationError,
    RegimeError,
    OutputError,
    NumericalError,
    ConsistencyError,
    SingularInputError,
    InstabilityError,
    DegenerateModeError,
    IntegrationError,
    EigensolverError,
    ResourceLimitError,
)
from .csv_store import CSVStore, format_cell, parse_cell

__all__ = [
    'Phase',
    'ModeKind',
    'ModeFamily',
    'PointFlag',
    'PhysicalInputs',
    'ReducedParams',
    'MeanFieldSolution',
    'QuadraticCoeffs',
    'NormalModeSpectrum',
    'NormalMode',
    'ModeDecomposition',
    'GroundStateStats',
    'DiffusionRates',
    'SpinPhotonBasis',
    'EDResult',
    'FiniteSizeScan',
    'SweepPoint',
    'CheckResult',
    'SWEEP_COLUMNS',
    'ORACLE_COLUMNS',
    'DickeModelError',
    'ConfigurationError',
    'RegimeError',
    'OutputError',
    'NumericalError',
    'ConsistencyError',
    'SingularInputError',
    'InstabilityError',
    'DegenerateModeError',
    'IntegrationError',
    'EigensolverError',
    'ResourceLimitError',
    'CSVStore',
    'format_cell',
    'parse_cell',
]
