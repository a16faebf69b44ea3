"""
Noise Diffusion

Depletion of the ground state by the cavity input noise. The fluctuation
operators obey dR/dt = M R + ξ with ⟨ξ_a(t) ξ_a†(t′)⟩ = 2κ δ(t−t′) as the only
non-vanishing noise correlator; the dissipative −κa drift is neglected.

Three rates are provided:

* the linear growth of the normal-mode populations ⟨ρ₊†ρ₊ + ρ₋†ρ₋⟩,
* the coarse-grained growth of the bare populations δN = ⟨a†a + b†b⟩, where
  pairs of modes oscillating faster than 1/δt are dropped,
* the adiabatic-elimination rate κ Mc²/(δ_C² + κ²).

``covariance_evolution`` integrates the exact second moments and serves as
a time-domain check of the coarse-grained rate.
"""

import math
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.integrate import solve_ivp

try:
    from ..data.models import (
        ReducedParams, QuadraticCoeffs, ModeDecomposition, ModeKind, DiffusionRates,
    )
    from ..data.errors import (
        ConfigurationError, ConsistencyError, InstabilityError, DegenerateModeError,
        IntegrationError,
    )
    from ..utils import get_logger
    from .meanfield import critical_coupling, solve_displacements
    from .fluctuations import (
        quadratic_coefficients, eigenfrequencies, is_critical, drift_matrix,
        mode_decomposition, annihilation_mode, adjoint_partner,
    )
except ImportError:
    from data.models import (
        ReducedParams, QuadraticCoeffs, ModeDecomposition, ModeKind, DiffusionRates,
    )
    from data.errors import (
        ConfigurationError, ConsistencyError, InstabilityError, DegenerateModeError,
        IntegrationError,
    )
    from utils import get_logger
    from physics.meanfield import critical_coupling, solve_displacements
    from physics.fluctuations import (
        quadratic_coefficients, eigenfrequencies, is_critical, drift_matrix,
        mode_decomposition, annihilation_mode, adjoint_partner,
    )


logger = get_logger("diffusion")

IMAGINARY_TOLERANCE = 1e-10

# Integrator settings of the covariance verifier
INTEGRATOR_METHOD = "DOP853"
INTEGRATOR_RTOL = 1e-10
INTEGRATOR_ATOL = 1e-14

# Sample times of the covariance verifier stay below this many 1/ω_R
MAX_EVOLUTION_TIME = 0.2


def default_coarse_grain_dt(r: ReducedParams) -> float:
    """Geometric mean 1/√(|δ_C| ω_R) of the two time scales bounding δt"""
    return 1.0 / math.sqrt(abs(r.delta_C) * r.omega_R)


def default_fit_window(r: ReducedParams) -> Tuple[float, float]:
    """Time window [5/|δ_C|, 0.1/ω_R] for the linear-trend fit"""
    return 5.0 / abs(r.delta_C), 0.1 / r.omega_R


def rate_normal_modes(m: ModeDecomposition, kappa: float) -> float:
    """
    Linear growth rate of the normal-mode populations

    Args:
        m: Mode decomposition
        kappa: Photon loss rate κ

    Returns:
        2κ Σ |l₂|² over the annihilation-like modes

    Raises:
        DegenerateModeError: the decomposition carries no modes
    """
    if not m.modes:
        raise DegenerateModeError("rate of the normal modes needs a full mode decomposition")
    total = sum(abs(mode.left[1]) ** 2 for mode in m.modes if mode.kind is ModeKind.ANNIHILATION)
    return float(2.0 * kappa * total)


def _population_rate(blocks: Sequence[Tuple[float, np.ndarray]], kappa: float,
                     delta_t: float) -> float:
    """
    Coarse-grained δN rate from (frequency, spectral projector) blocks

    2κ Σ_{k,l} [(P_k)₂₁(P_l)₁₂ + (P_k)₄₁(P_l)₃₂] Θ(1/δt − |ω_k + ω_l|),
    with Θ(0) = 0.
    """
    if not delta_t > 0:
        raise ConfigurationError("coarse-graining step δt must be positive")

    cutoff = 1.0 / delta_t
    total = 0.0 + 0.0j
    magnitude = 0.0
    for freq_k, proj_k in blocks:
        for freq_l, proj_l in blocks:
            if not abs(freq_k + freq_l) < cutoff:
                continue
            term = proj_k[1, 0] * proj_l[0, 1] + proj_k[3, 0] * proj_l[2, 1]
            total += term
            magnitude += abs(term)

    rate = 2.0 * kappa * total
    if abs(rate.imag) > IMAGINARY_TOLERANCE * max(1.0, 2.0 * kappa * magnitude):
        raise ConsistencyError(f"population rate has imaginary part {rate.imag:.3e}")
    return float(rate.real)


def rate_populations(m: ModeDecomposition, kappa: float, delta_t: float) -> float:
    """
    Coarse-grained growth rate of δN = ⟨a†a + b†b⟩

    Args:
        m: Mode decomposition
        kappa: Photon loss rate κ
        delta_t: Coarse-graining step δt

    Returns:
        Rate; zero when no pair is cut (completeness relation)

    Raises:
        ConsistencyError: the sum has a non-negligible imaginary part
    """
    return _population_rate(m.projectors(), kappa, delta_t)


def critical_rate_populations(q: QuadraticCoeffs, kappa: float, delta_t: float) -> float:
    """
    Coarse-grained δN rate at the critical point

    The merged slow pair is represented by P₋ = 1 − P₊ at frequency 0, so the
    value is the continuous limit of ``rate_populations``.

    Args:
        q: Quadratic coefficients with ω₋ = 0
        kappa: Photon loss rate κ
        delta_t: Coarse-graining step δt

    Returns:
        Rate
    """
    spectrum = eigenfrequencies(q)
    if not spectrum.stable:
        raise InstabilityError("normal-mode frequencies are complex or imaginary")

    drift = drift_matrix(q).drift
    left, right = annihilation_mode(drift, spectrum.omega_plus)
    plus_ann = np.outer(right, left.conj())
    plus_cre = np.outer(adjoint_partner(right), adjoint_partner(left).conj())
    slow = np.eye(4) - plus_ann - plus_cre

    blocks = [
        (spectrum.omega_plus, plus_ann),
        (-spectrum.omega_plus, plus_cre),
        (0.0, slow),
    ]
    return _population_rate(blocks, kappa, delta_t)


def rate_adiabatic(q: QuadraticCoeffs, r: ReducedParams, kappa: Optional[float] = None) -> float:
    """κ Mc²/(δ_C² + κ²), with κ from ``r`` unless given"""
    kappa = r.kappa if kappa is None else kappa
    return kappa * q.Mc ** 2 / (r.delta_C ** 2 + kappa ** 2)


def estimated_rate_below_threshold(r: ReducedParams, kappa: Optional[float] = None) -> float:
    """Order-of-magnitude estimate ω_R (κ/|δ_C|)(y/y_crit)² below threshold"""
    kappa = r.kappa if kappa is None else kappa
    ratio = r.y / critical_coupling(r)
    return r.omega_R * (kappa / abs(r.delta_C)) * ratio ** 2


def adiabaticity_margin(r: ReducedParams, kappa: Optional[float] = None) -> float:
    """
    Ratio ω₋ / rate_adiabatic

    The ground state is followed adiabatically only while this is ≫ 1.
    """
    q = quadratic_coefficients(r, solve_displacements(r))
    spectrum = eigenfrequencies(q)
    rate = rate_adiabatic(q, r, kappa)
    if rate == 0:
        return math.inf
    return spectrum.omega_minus / rate


def diffusion_rates(q: QuadraticCoeffs, r: ReducedParams, kappa: Optional[float] = None,
                    delta_t: Optional[float] = None) -> DiffusionRates:
    """
    All three depletion rates at one parameter point

    At the critical point ``rate_modes`` is nan and the population rate is
    taken from ``critical_rate_populations``.

    Args:
        q: Quadratic coefficients
        r: Reduced parameters
        kappa: Photon loss rate (defaults to r.kappa)
        delta_t: Coarse-graining step (defaults to 1/√(|δ_C| ω_R))

    Returns:
        DiffusionRates

    Raises:
        InstabilityError: spectrum not stable
    """
    kappa = r.kappa if kappa is None else kappa
    delta_t = default_coarse_grain_dt(r) if delta_t is None else delta_t

    spectrum = eigenfrequencies(q)
    if not spectrum.stable:
        raise InstabilityError("normal-mode frequencies are complex or imaginary")

    if is_critical(spectrum):
        logger.debug("Critical point: population rate from the merged slow projector")
        return DiffusionRates(
            rate_modes=math.nan,
            rate_populations=critical_rate_populations(q, kappa, delta_t),
            rate_adiabatic=rate_adiabatic(q, r, kappa),
            delta_t=delta_t,
        )

    modes = mode_decomposition(q)
    return DiffusionRates(
        rate_modes=rate_normal_modes(modes, kappa),
        rate_populations=rate_populations(modes, kappa, delta_t),
        rate_adiabatic=rate_adiabatic(q, r, kappa),
        delta_t=delta_t,
    )


def covariance_evolution(m: ModeDecomposition, kappa: float,
                         t_grid: Iterable[float],
                         integrator: Optional[Dict[str, Any]] = None,
                         omega_R: float = 1.0) -> np.ndarray:
    """
    Growth δN(t) of the bare populations from the normal-mode vacuum

    Integrates D′ = M D + D Mᵀ + N for the change D_ij = ⟨R_i R_j⟩ − ⟨R_i R_j⟩_vac,
    D(0) = 0, with N₁₂ = 2κ the only noise entry. δN = D₂₁ + D₄₃.

    Args:
        m: Mode decomposition (only the drift matrix is read)
        kappa: Photon loss rate κ
        t_grid: Increasing sample times inside [0, 0.2/ω_R]
        integrator: Optional overrides (integrator_method, integrator_rtol,
            integrator_atol) from the numerics settings
        omega_R: Recoil frequency setting the longest admissible time

    Returns:
        δN at each sample time

    Raises:
        ConfigurationError: invalid time grid
        IntegrationError: the integrator failed
    """
    times = np.asarray(list(t_grid), dtype=float)
    if times.size == 0 or times[0] < 0 or np.any(np.diff(times) <= 0):
        raise ConfigurationError("t_grid must be non-negative and strictly increasing")
    if times[-1] > MAX_EVOLUTION_TIME / omega_R:
        raise ConfigurationError(
            f"t_grid must end by {MAX_EVOLUTION_TIME:g}/ω_R, got {times[-1]:g}"
        )

    integrator = integrator or {}
    drift = m.drift
    noise = np.zeros((4, 4), dtype=complex)
    noise[0, 1] = 2.0 * kappa

    def rhs(_t: float, flat: np.ndarray) -> np.ndarray:
        D = flat.reshape(4, 4)
        return (drift @ D + D @ drift.T + noise).ravel()

    if times[-1] == 0.0:
        return np.zeros(times.size)

    solution = solve_ivp(
        rhs,
        (0.0, float(times[-1])),
        np.zeros(16, dtype=complex),
        method=integrator.get("integrator_method", INTEGRATOR_METHOD),
        t_eval=times,
        rtol=float(integrator.get("integrator_rtol", INTEGRATOR_RTOL)),
        atol=float(integrator.get("integrator_atol", INTEGRATOR_ATOL)),
    )
    if not solution.success:
        t_reached = float(solution.t[-1]) if solution.t.size else 0.0
        raise IntegrationError(solution.message, t_reached)

    moments = solution.y.reshape(4, 4, -1)
    return np.real(moments[1, 0] + moments[3, 2])


def trend_slope(times: Sequence[float], samples: Sequence[float],
                fast_frequencies: Iterable[float] = ()) -> float:
    """
    Slope of the linear trend of a signal with known oscillations

    Least squares over the regressors 1, t, cos Ωt and sin Ωt for every fast
    frequency Ω.

    Args:
        times: Sample times
        samples: Signal values
        fast_frequencies: Angular frequencies to regress out

    Returns:
        Coefficient of t
    """
    t = np.asarray(times, dtype=float)
    columns = [np.ones_like(t), t]
    for omega in sorted({round(abs(f), 12) for f in fast_frequencies if abs(f) > 0}):
        columns.append(np.cos(omega * t))
        columns.append(np.sin(omega * t))
    design = np.column_stack(columns)
    coefficients, *_ = np.linalg.lstsq(design, np.asarray(samples, dtype=float), rcond=None)
    return float(coefficients[1])


def cut_frequencies(m: ModeDecomposition, delta_t: float) -> List[float]:
    """Distinct |ω_k + ω_l| removed by the coarse-graining cut"""
    cutoff = 1.0 / delta_t
    sums = {
        abs(a + b)
        for a in m.frequencies
        for b in m.frequencies
        if abs(a + b) >= cutoff
    }
    return sorted(sums)


def evolution_slope(m: ModeDecomposition, kappa: float, delta_t: float,
                    window: Tuple[float, float], points: int = 2000,
                    integrator: Optional[Dict[str, Any]] = None,
                    omega_R: float = 1.0) -> float:
    """
    Linear-trend slope of the integrated δN(t) over a time window

    Args:
        m: Mode decomposition
        kappa: Photon loss rate κ
        delta_t: Coarse-graining step deciding which oscillations are removed
        window: (t_start, t_end) of the fit
        points: Number of samples in the window
        integrator: Integrator overrides passed to covariance_evolution
        omega_R: Recoil frequency (bounds the window)

    Returns:
        Slope comparable with ``rate_populations(m, kappa, delta_t)``
    """
    start, end = window
    if not 0.0 <= start < end:
        raise ConfigurationError(f"fit window must satisfy 0 <= start < end, got {window}")
    times = np.linspace(start, end, points)
    samples = covariance_evolution(m, kappa, times, integrator, omega_R)
    return trend_slope(times, samples, cut_frequencies(m, delta_t))
