"""Package initialization for physics module"""
from .params import reduce_parameters, validate_regime, check_regime
from .meanfield import (
    critical_coupling,
    solve_displacements,
    meanfield_residuals,
    meanfield_energy,
    quartic_residual,
    symmetry_partner,
)
from .fluctuations import (
    quadratic_coefficients,
    critical_margin,
    eigenfrequencies,
    is_critical,
    gap_exponent,
    drift_matrix,
    mode_decomposition,
    ground_state_populations,
    quadrature_hamiltonian,
    ground_state_covariance,
    williamson_populations,
    approximate_soft_frequency,
)
from .diffusion import (
    rate_normal_modes,
    rate_populations,
    rate_adiabatic,
    critical_rate_populations,
    diffusion_rates,
    covariance_evolution,
    trend_slope,
    evolution_slope,
    default_coarse_grain_dt,
    default_fit_window,
    estimated_rate_below_threshold,
    adiabaticity_margin,
)
from .oracle import ExactDiagonalizer, default_n_max, variational_energy

__all__ = [
    'reduce_parameters',
    'validate_regime',
    'check_regime',
    'critical_coupling',
    'solve_displacements',
    'meanfield_residuals',
    'meanfield_energy',
    'quartic_residual',
    'symmetry_partner',
    'quadratic_coefficients',
    'critical_margin',
    'eigenfrequencies',
    'is_critical',
    'gap_exponent',
    'drift_matrix',
    'mode_decomposition',
    'ground_state_populations',
    'quadrature_hamiltonian',
    'ground_state_covariance',
    'williamson_populations',
    'approximate_soft_frequency',
    'rate_normal_modes',
    'rate_populations',
    'rate_adiabatic',
    'critical_rate_populations',
    'diffusion_rates',
    'covariance_evolution',
    'trend_slope',
    'evolution_slope',
    'default_coarse_grain_dt',
    'default_fit_window',
    'estimated_rate_below_threshold',
    'adiabaticity_margin',
    'ExactDiagonalizer',
    'default_n_max',
    'variational_energy',
]
