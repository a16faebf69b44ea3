"""
Invariant Suite

Numerical self-checks of every physics module at the standard parameter set
δ_C = −100 ω_R, u = −0.1 ω_R, κ = ω_R. Each check returns a CheckResult; a
check that raises is reported as failed with the exception text.
"""

import math
import time
from typing import Any, Callable, Dict, List, Optional, Tuple

import numpy as np

try:
    from ..data.models import PhysicalInputs, ReducedParams, ModeFamily, ModeKind, CheckResult
    from ..physics.meanfield import (
        critical_coupling, solve_displacements, quartic_residual, meanfield_residuals,
        symmetry_partner,
    )
    from ..physics.fluctuations import (
        quadratic_coefficients, eigenfrequencies, drift_matrix, mode_decomposition,
        gap_exponent, approximate_soft_frequency, ground_state_populations,
        williamson_populations, BOSONIC_METRIC,
    )
    from ..physics.diffusion import (
        rate_normal_modes, rate_populations, rate_adiabatic, diffusion_rates,
        default_coarse_grain_dt, default_fit_window, evolution_slope,
    )
    from ..physics.params import reduce_parameters
    from ..physics.oracle import ExactDiagonalizer
    from ..utils import get_logger
except ImportError:
    from data.models import PhysicalInputs, ReducedParams, ModeFamily, ModeKind, CheckResult
    from physics.meanfield import (
        critical_coupling, solve_displacements, quartic_residual, meanfield_residuals,
        symmetry_partner,
    )
    from physics.fluctuations import (
        quadratic_coefficients, eigenfrequencies, drift_matrix, mode_decomposition,
        gap_exponent, approximate_soft_frequency, ground_state_populations,
        williamson_populations, BOSONIC_METRIC,
    )
    from physics.diffusion import (
        rate_normal_modes, rate_populations, rate_adiabatic, diffusion_rates,
        default_coarse_grain_dt, default_fit_window, evolution_slope,
    )
    from physics.params import reduce_parameters
    from physics.oracle import ExactDiagonalizer
    from utils import get_logger


logger = get_logger("validation")

STANDARD = ReducedParams(omega_R=1.0, delta_C=-100.0, u=-0.1, kappa=1.0)

# Laboratory inputs mapping onto u = −2.5, y = √200, δ_C = −45
LAB_INPUTS = dict(
    atom_pump_detuning=-1000.0,
    cavity_pump_detuning=-50.0,
    single_photon_rabi=10.0,
    pump_rabi=100.0,
    atom_number=100,
    recoil=1.0,
    photon_loss=0.5,
)


def _at_ratio(ratio: float, base: ReducedParams = STANDARD) -> ReducedParams:
    return base.with_y(ratio * critical_coupling(base))


def _coefficients(params: ReducedParams):
    return quadratic_coefficients(params, solve_displacements(params))


def check_critical_coupling() -> Tuple[bool, str]:
    y_crit = critical_coupling(STANDARD)
    below = solve_displacements(STANDARD.with_y(y_crit))
    worst = 0.0
    for ratio in np.linspace(1.01, 2.0, 50):
        params = _at_ratio(ratio)
        solution = solve_displacements(params)
        worst = max(worst, abs(quartic_residual(params, solution.beta0_sq)))
    passed = y_crit == 10.0 and below.beta0 == 0.0 and worst < 1e-12
    return passed, f"y_crit={y_crit!r}, worst quadratic residual {worst:.2e}"


def check_u0_closed_form() -> Tuple[bool, str]:
    base = ReducedParams(omega_R=1.0, delta_C=-100.0, u=0.0)
    worst = 0.0
    for ratio in np.linspace(1.001, 3.0, 100):
        params = _at_ratio(ratio, base)
        expected = (params.y ** 2 - 100.0) / (2.0 * params.y ** 2)
        worst = max(worst, abs(solve_displacements(params).beta0_sq - expected))
    return worst < 1e-12, f"max |β0² − (y²−y_crit²)/2y²| = {worst:.2e}"


def check_drift_spectrum(draws: int = 100, seed: int = 12345) -> Tuple[bool, str]:
    rng = np.random.default_rng(seed)
    worst = 0.0
    accepted = 0
    attempts = 0
    while accepted < draws and attempts < 50 * draws:
        attempts += 1
        delta_C = -rng.uniform(5.0, 200.0)
        u = rng.uniform(-0.5, 0.5) * abs(delta_C) * 0.1
        ratio = rng.uniform(0.0, 2.5)
        if abs(ratio - 1.0) < 0.02:
            continue
        params = ReducedParams(omega_R=1.0, delta_C=delta_C, u=u)
        params = _at_ratio(ratio, params)
        q = _coefficients(params)
        spectrum = eigenfrequencies(q)
        if not spectrum.stable:
            continue
        accepted += 1
        eigenvalues = np.linalg.eigvals(drift_matrix(q).drift)
        numeric = np.sort(eigenvalues.imag)
        expected = np.sort([-spectrum.omega_plus, -spectrum.omega_minus,
                            spectrum.omega_minus, spectrum.omega_plus])
        relative = np.abs(numeric - expected) / np.maximum(np.abs(expected), 1e-300)
        worst = max(worst, float(relative.max()), float(np.abs(eigenvalues.real).max() / spectrum.omega_plus))

    y0 = eigenfrequencies(_coefficients(STANDARD))
    critical = eigenfrequencies(_coefficients(_at_ratio(1.0)))
    passed = (
        accepted == draws and worst < 1e-8
        and y0.omega_plus == 100.0 and y0.omega_minus == 1.0
        and critical.omega_minus < 1e-6
    )
    return passed, (
        f"{accepted} draws, worst relative mismatch {worst:.2e}; "
        f"y=0: ({y0.omega_plus!r}, {y0.omega_minus!r}); ω₋(y_crit)={critical.omega_minus:.2e}"
    )


def check_gap_exponent() -> Tuple[bool, str]:
    below = gap_exponent(STANDARD, "below", (1e-4, 1e-2))
    above = gap_exponent(STANDARD, "above", (1e-4, 1e-2))
    passed = abs(below - 0.5) <= 0.02 and abs(above - 0.5) <= 0.02
    return passed, f"below {below:.4f}, above {above:.4f}"


def check_soft_frequency() -> Tuple[bool, str]:
    worst = 0.0
    for ratio in np.linspace(0.0, 0.99, 100):
        params = _at_ratio(ratio)
        omega_minus = eigenfrequencies(_coefficients(params)).omega_minus
        worst = max(worst, abs(omega_minus - approximate_soft_frequency(params)) / omega_minus)
    return worst < 1e-2, f"max relative deviation {worst:.2e}"


def check_mode_normalization() -> Tuple[bool, str]:
    worst = 0.0
    for ratio in (0.6, 1.5):
        modes = mode_decomposition(_coefficients(_at_ratio(ratio)))
        worst = max(worst, modes.biorthogonality_residual(), modes.completeness_residual())
        for family in ModeFamily:
            left = modes.mode(family, ModeKind.ANNIHILATION).left
            norm = np.real(np.vdot(left, BOSONIC_METRIC @ left))
            worst = max(worst, abs(norm - 1.0))
    return worst < 1e-10, f"worst residual {worst:.2e}"


def check_populations() -> Tuple[bool, str]:
    worst = 0.0
    for ratio in (0.3, 0.6, 0.9, 1.5, 2.0):
        q = _coefficients(_at_ratio(ratio))
        modes = ground_state_populations(q)
        symplectic = williamson_populations(q)
        for a, b in ((modes.n_photon, symplectic.n_photon), (modes.n_atom, symplectic.n_atom)):
            worst = max(worst, abs(a - b) / max(abs(b), 1e-300))

    trend = [ground_state_populations(_coefficients(_at_ratio(r))) for r in (0.9, 0.99, 0.999)]
    monotone = all(
        trend[i].n_photon < trend[i + 1].n_photon and trend[i].n_atom < trend[i + 1].n_atom
        for i in range(2)
    )
    return worst < 1e-8 and monotone, f"worst relative mismatch {worst:.2e}, divergent trend {monotone}"


def check_diffusion_consistency() -> Tuple[bool, str]:
    worst = 0.0
    for ratio in np.linspace(0.1, 0.9, 9):
        params = _at_ratio(ratio)
        q = _coefficients(params)
        rates = diffusion_rates(q, params)
        worst = max(worst, abs(rates.rate_populations - rates.rate_adiabatic) / rates.rate_adiabatic)

    critical = _at_ratio(1.0)
    at_critical = diffusion_rates(_coefficients(critical), critical)
    reference = rate_normal_modes(mode_decomposition(_coefficients(_at_ratio(0.5))), 1.0)
    near = rate_normal_modes(mode_decomposition(_coefficients(_at_ratio(1.0 - 1e-6))), 1.0)
    finite = math.isfinite(at_critical.rate_populations)
    passed = worst < 0.05 and finite and near > 1e3 * reference
    return passed, (
        f"max relative gap to adiabatic rate {worst:.2%}; rate at y_crit "
        f"{at_critical.rate_populations:.4e}; mode-rate ratio {near / reference:.3g}"
    )


def check_completeness_zeroing() -> Tuple[bool, str]:
    worst = 0.0
    for ratio in (0.3, 0.6, 1.5):
        q = _coefficients(_at_ratio(ratio))
        spectrum = eigenfrequencies(q)
        delta_t = 0.5 / (2.0 * spectrum.omega_plus)
        worst = max(worst, abs(rate_populations(mode_decomposition(q), 1.0, delta_t)))
    return worst < 1e-10, f"max |rate| with no pair cut {worst:.2e}"


def check_time_domain(integrator: Optional[Dict[str, Any]] = None) -> Tuple[bool, str]:
    worst = 0.0
    for ratio in (0.3, 0.6, 0.9):
        params = _at_ratio(ratio)
        modes = mode_decomposition(_coefficients(params))
        delta_t = default_coarse_grain_dt(params)
        expected = rate_populations(modes, params.kappa, delta_t)
        slope = evolution_slope(modes, params.kappa, delta_t, default_fit_window(params),
                                integrator=integrator, omega_R=params.omega_R)
        worst = max(worst, abs(slope - expected) / expected)
    return worst < 0.10, f"max relative slope mismatch {worst:.2%}"


def check_parameter_mapping(scale: float = 2.5) -> Tuple[bool, str]:
    inputs = PhysicalInputs(**LAB_INPUTS)
    scaled_inputs = PhysicalInputs(**{
        key: value if key == 'atom_number' else scale * value
        for key, value in LAB_INPUTS.items()
    })
    base = reduce_parameters(inputs)
    scaled = reduce_parameters(scaled_inputs)
    worst = max(
        abs(getattr(scaled, name) - scale * getattr(base, name)) / abs(scale * getattr(base, name))
        for name in ('omega_R', 'delta_C', 'u', 'y', 'kappa')
    )
    y_sq = (2.0 * inputs.atom_number * inputs.pump_rabi ** 2 * inputs.single_photon_rabi ** 2
            / inputs.atom_pump_detuning ** 2)
    round_trip = abs(base.y ** 2 - y_sq) / y_sq
    return worst < 1e-12 and round_trip < 1e-12, (
        f"scale covariance {worst:.2e}, y² round trip {round_trip:.2e}"
    )


def check_symmetry_partner() -> Tuple[bool, str]:
    worst = 0.0
    for ratio in (1.2, 1.5, 2.0):
        params = _at_ratio(ratio)
        solution = solve_displacements(params)
        q = quadratic_coefficients(params, solution)
        flipped = quadratic_coefficients(params, symmetry_partner(solution))
        spectrum, mirrored = eigenfrequencies(q), eigenfrequencies(flipped)
        rate = diffusion_rates(q, params).rate_populations
        mirrored_rate = diffusion_rates(flipped, params).rate_populations
        worst = max(
            worst,
            abs(spectrum.omega_plus - mirrored.omega_plus) / spectrum.omega_plus,
            abs(spectrum.omega_minus - mirrored.omega_minus) / spectrum.omega_minus,
            abs(rate - mirrored_rate) / max(abs(rate), 1e-300),
        )
    return worst < 1e-12, f"max relative change under (α0, β0) → (−α0, −β0): {worst:.2e}"


def check_squeezing_coefficient() -> Tuple[bool, str]:
    below = [_coefficients(_at_ratio(r)).squeezing_coefficient for r in np.linspace(0.0, 0.99, 12)]
    above = _coefficients(_at_ratio(1.5)).squeezing_coefficient
    passed = all(value == 0.0 for value in below) and above != 0.0
    return passed, f"max |(Mx − My)/4| below threshold {max(map(abs, below)):.2e}, at 1.5 y_crit {above:.4e}"


def check_rate_monotonicity() -> Tuple[bool, str]:
    table = []
    for ratio in np.linspace(0.0, 0.9, 10):
        params = _at_ratio(ratio)
        rates = diffusion_rates(_coefficients(params), params)
        table.append((rates.rate_modes, rates.rate_populations, rates.rate_adiabatic))
    columns = np.array(table).T
    steps = np.diff(columns, axis=1)
    slack = 1e-12 * np.abs(columns).max(axis=1, keepdims=True)
    return bool(np.all(steps >= -slack)), f"smallest step per rate {steps.min(axis=1)}"


def check_loss_scaling() -> Tuple[bool, str]:
    params = _at_ratio(0.6)
    q = _coefficients(params)
    modes = mode_decomposition(q)
    delta_t = default_coarse_grain_dt(params)
    kappa = 0.01
    pairs = [
        (rate_normal_modes(modes, 2.0 * kappa), rate_normal_modes(modes, kappa)),
        (rate_populations(modes, 2.0 * kappa, delta_t), rate_populations(modes, kappa, delta_t)),
        (rate_adiabatic(q, params, 2.0 * kappa), rate_adiabatic(q, params, kappa)),
    ]
    worst = max(abs(doubled / (2.0 * single) - 1.0) for doubled, single in pairs)
    return worst < 1e-6, f"max deviation from linear κ scaling {worst:.2e}"


def check_gauge_invariance() -> Tuple[bool, str]:
    oracle = ExactDiagonalizer(_at_ratio(1.5))
    worst = 0.0
    for N in (6, 10):
        rotated = oracle.solve(N, gauge_rotated=True)
        original = oracle.solve(N, gauge_rotated=False)
        worst = max(
            worst,
            abs(rotated.mean_photon - original.mean_photon),
            abs(rotated.sz_per_N - original.sz_per_N),
            abs(rotated.ground_energy - original.ground_energy),
        )
    return worst < 1e-10, f"max observable change under a → i·a: {worst:.2e}"


def check_oracle() -> Tuple[bool, str]:
    decoupled = ExactDiagonalizer(STANDARD).solve(10)
    params = _at_ratio(2.0)
    scan = ExactDiagonalizer(params).finite_size_scan([10, 20, 40])
    beta_sq = solve_displacements(params).beta0_sq
    differences = [abs(row.order_param_beta2 - beta_sq) for row in scan.rows]
    monotone = all(a > b for a, b in zip(differences, differences[1:]))
    extrapolated = scan.extrapolated.get('order_param_beta2', math.nan)
    close = abs(extrapolated - beta_sq) <= 0.02 * beta_sq
    gap_ok = abs(decoupled.gap - 1.0) < 1e-8
    return monotone and close and gap_ok, (
        f"|ed_beta2 − β0²| = {[f'{d:.3e}' for d in differences]}, "
        f"extrapolated {extrapolated:.5f} vs {beta_sq:.5f}, y=0 gap {decoupled.gap!r}"
    )


CHECKS: List[Tuple[str, Callable[[], Tuple[bool, str]]]] = [
    ('critical coupling and quadratic residual', check_critical_coupling),
    ('u=0 closed form', check_u0_closed_form),
    ('drift spectrum against ω±', check_drift_spectrum),
    ('gap exponent', check_gap_exponent),
    ('below-threshold soft frequency', check_soft_frequency),
    ('mode normalization', check_mode_normalization),
    ('ground-state populations', check_populations),
    ('diffusion consistency', check_diffusion_consistency),
    ('completeness zeroing', check_completeness_zeroing),
    ('time-domain slope', check_time_domain),
    ('parameter mapping', check_parameter_mapping),
    ('symmetry partner', check_symmetry_partner),
    ('two-mode squeezing below threshold', check_squeezing_coefficient),
    ('rate monotonicity below threshold', check_rate_monotonicity),
    ('linear loss scaling', check_loss_scaling),
    ('gauge invariance of exact diagonalization', check_gauge_invariance),
]


def run_validation(settings: Optional[Dict[str, Any]] = None,
                   numerics: Optional[Dict[str, Any]] = None) -> List[CheckResult]:
    """
    Run the invariant suite

    Args:
        settings: The ``validate`` settings section (random_draws, seed,
            include_oracle)
        numerics: The ``numerics`` settings section (integrator options of
            the time-domain check)

    Returns:
        One CheckResult per check
    """
    settings = settings or {}
    draws = int(settings.get('random_draws', 100))
    seed = int(settings.get('seed', 12345))
    configured = {
        check_drift_spectrum: lambda: check_drift_spectrum(draws, seed),
        check_time_domain: lambda: check_time_domain(numerics),
    }
    checks = [(name, configured.get(check, check)) for name, check in CHECKS]
    if settings.get('include_oracle', True):
        checks.append(('exact diagonalization convergence', check_oracle))

    results = []
    for name, check in checks:
        start = time.time()
        try:
            passed, detail = check()
        except Exception as e:
            passed, detail = False, f"{type(e).__name__}: {e}"
        logger.debug(f"{name}: {time.time() - start:.2f}s")
        results.append(CheckResult(name=name, passed=bool(passed), detail=detail))
    return results
