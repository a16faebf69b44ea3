"""
Quantum Fluctuations

Quadratic Hamiltonian of the fluctuations around the mean-field solution,

    H = E0 + M0 a†a + (Mx+My)/2 b†b + (Mx−My)/4 (b†² + b²)
        + i Mc/2 (a† − a)(b† + b),

its normal-mode spectrum, the biorthogonal eigenmodes of the Heisenberg drift
matrix and the incoherent populations of the normal-mode vacuum.

Operators are ordered R = [a, a†, b, b†]; quadratures q = [x_a, p_a, x_b, p_b]
with x = (c + c†)/√2, p = (c − c†)/(i√2).
"""

import math
from typing import Literal, Optional, Tuple

import numpy as np
from scipy import linalg

try:
    from ..data.models import (
        ReducedParams, MeanFieldSolution, QuadraticCoeffs, NormalModeSpectrum,
        NormalMode, ModeDecomposition, ModeKind, ModeFamily, GroundStateStats,
    )
    from ..data.errors import (
        ConfigurationError, SingularInputError, InstabilityError, DegenerateModeError,
    )
    from ..utils import get_logger, geometric_grid, linear_fit
    from .meanfield import critical_coupling, solve_displacements
except ImportError:
    from data.models import (
        ReducedParams, MeanFieldSolution, QuadraticCoeffs, NormalModeSpectrum,
        NormalMode, ModeDecomposition, ModeKind, ModeFamily, GroundStateStats,
    )
    from data.errors import (
        ConfigurationError, SingularInputError, InstabilityError, DegenerateModeError,
    )
    from utils import get_logger, geometric_grid, linear_fit
    from physics.meanfield import critical_coupling, solve_displacements


logger = get_logger("fluctuations")

# ω₋ at or below this fraction of ω₊ counts as the critical point
DEGENERACY_TOLERANCE = 1e-8

# Largest |1 − y/y_crit| accepted by gap_exponent
GAP_WINDOW_LIMIT = 1e-2

# Bosonic metric: [R_i, R_j†] = η_ij
BOSONIC_METRIC = np.diag([1.0, -1.0, 1.0, -1.0])

SYMPLECTIC_FORM = np.array([
    [0.0, 1.0, 0.0, 0.0],
    [-1.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 1.0],
    [0.0, 0.0, -1.0, 0.0],
])

_ADJOINT_PERMUTATION = [1, 0, 3, 2]


def adjoint_partner(vector: np.ndarray) -> np.ndarray:
    """Swap components 1↔2 and 3↔4 and conjugate"""
    return np.conj(vector[_ADJOINT_PERMUTATION])


def quadratic_coefficients(r: ReducedParams, s: MeanFieldSolution) -> QuadraticCoeffs:
    """
    Coefficients of the quadratic fluctuation Hamiltonian

    Args:
        r: Reduced parameters
        s: Mean-field solution the fluctuations are expanded around

    Returns:
        QuadraticCoeffs (M0, Mx, My, Mc)

    Raises:
        SingularInputError: beta0² = 1
    """
    a0, b0 = s.alpha0, s.beta0
    b_sq = b0 * b0
    if b_sq >= 1.0:
        raise SingularInputError("beta0² = 1: the (1−β0²)^(−3/2) factor in Mx is singular")

    root = math.sqrt(1.0 - b_sq)
    M0 = -r.delta_C + r.u * b_sq
    Mx = r.omega_R + r.u * a0 * a0 - r.y * a0 * b0 * (3.0 - 2.0 * b_sq) / root ** 3
    My = r.omega_R + r.u * a0 * a0 - r.y * a0 * b0 / root
    Mc = 2.0 * r.u * a0 * b0 + r.y * (1.0 - 2.0 * b_sq) / root
    return QuadraticCoeffs(M0=M0, Mx=Mx, My=My, Mc=Mc)


def critical_margin(q: QuadraticCoeffs) -> float:
    """M0·Mx − Mc², which vanishes exactly at the critical point"""
    return q.M0 * q.Mx - q.Mc * q.Mc


def eigenfrequencies(q: QuadraticCoeffs) -> NormalModeSpectrum:
    """
    Normal-mode frequencies ω±

    ω±² = (M0² + MxMy)/2 ± √((M0² − MxMy)²/4 + M0 My Mc²). The smaller root
    is evaluated as M0 My (M0 Mx − Mc²)/ω₊² to avoid cancellation near the
    critical point.

    Args:
        q: Quadratic coefficients

    Returns:
        NormalModeSpectrum; ω± are nan when the spectrum is unstable
    """
    mean = 0.5 * (q.M0 ** 2 + q.Mx * q.My)
    discriminant = 0.25 * (q.M0 ** 2 - q.Mx * q.My) ** 2 + q.M0 * q.My * q.Mc ** 2

    if discriminant < 0:
        root = 1j * math.sqrt(-discriminant)
        return NormalModeSpectrum(
            omega_plus=math.nan,
            omega_minus=math.nan,
            stable=False,
            omega_plus_sq=mean + root,
            omega_minus_sq=mean - root,
        )

    plus_sq = mean + math.sqrt(discriminant)
    if plus_sq <= 0:
        return NormalModeSpectrum(
            omega_plus=math.nan,
            omega_minus=math.nan,
            stable=False,
            omega_plus_sq=plus_sq,
            omega_minus_sq=mean - math.sqrt(discriminant),
        )

    minus_sq = q.M0 * q.My * critical_margin(q) / plus_sq
    # rounding at the critical point
    if -DEGENERACY_TOLERANCE ** 2 * plus_sq <= minus_sq < 0:
        minus_sq = 0.0
    if minus_sq < 0:
        return NormalModeSpectrum(
            omega_plus=math.sqrt(plus_sq),
            omega_minus=math.nan,
            stable=False,
            omega_plus_sq=plus_sq,
            omega_minus_sq=minus_sq,
        )

    return NormalModeSpectrum(
        omega_plus=math.sqrt(plus_sq),
        omega_minus=math.sqrt(minus_sq),
        stable=True,
        omega_plus_sq=plus_sq,
        omega_minus_sq=minus_sq,
    )


def is_critical(spectrum: NormalModeSpectrum) -> bool:
    """Whether a stable spectrum sits at the critical point (ω₋ ≈ 0)"""
    return spectrum.stable and spectrum.omega_minus <= DEGENERACY_TOLERANCE * spectrum.omega_plus


def approximate_soft_frequency(r: ReducedParams, y: Optional[float] = None) -> float:
    """
    Below-threshold estimate ω_R √(1 − (y/y_crit)²) of ω₋

    Valid for |δ_C| ≫ ω_R; nan above threshold.
    """
    y = r.y if y is None else y
    ratio = y / critical_coupling(r)
    if ratio > 1.0:
        return math.nan
    return r.omega_R * math.sqrt(1.0 - ratio * ratio)


def gap_exponent(r: ReducedParams,
                 side: Literal["below", "above"] = "below",
                 window: Tuple[float, float] = (1e-4, 1e-2),
                 points: int = 25) -> float:
    """
    Fit the exponent of ω₋ ∝ |1 − y/y_crit|^ν next to the critical point

    Args:
        r: Reduced parameters (y is ignored)
        side: Approach from below or above threshold
        window: Interval of relative distances |1 − y/y_crit|
        points: Number of geometric grid points

    Returns:
        Least-squares slope of log ω₋ against log |1 − y/y_crit|

    Raises:
        ConfigurationError: window not inside (0, 1e-2] or unknown side
        InstabilityError: unstable spectrum inside the window
    """
    lower, upper = window
    if not 0.0 < lower < upper <= GAP_WINDOW_LIMIT:
        raise ConfigurationError(
            f"gap exponent window must lie inside (0, {GAP_WINDOW_LIMIT:g}], got {window}"
        )
    if side not in ("below", "above"):
        raise ConfigurationError(f"side must be 'below' or 'above', got {side!r}")

    y_crit = critical_coupling(r)
    sign = -1.0 if side == "below" else 1.0
    distances = geometric_grid(lower, upper, points)

    log_gaps = []
    for epsilon in distances:
        point = r.with_y(y_crit * (1.0 + sign * epsilon))
        spectrum = eigenfrequencies(quadratic_coefficients(point, solve_displacements(point)))
        if not spectrum.stable or spectrum.omega_minus <= 0:
            raise InstabilityError(
                f"unstable spectrum at |1 − y/y_crit| = {epsilon:g} ({side} threshold)"
            )
        log_gaps.append(math.log(spectrum.omega_minus))

    slope, _ = linear_fit(np.log(distances), log_gaps)
    logger.debug(f"Gap exponent {side} threshold over {window}: {slope:.4f}")
    return slope


def drift_matrix(q: QuadraticCoeffs) -> ModeDecomposition:
    """
    Heisenberg drift matrix dR/dt = M R of the fluctuation operators

    Args:
        q: Quadratic coefficients

    Returns:
        ModeDecomposition holding only the drift matrix
    """
    half_c = 0.5 * q.Mc
    s = 0.5 * (q.Mx + q.My)
    d = 0.5 * (q.Mx - q.My)
    drift = np.array([
        [-1j * q.M0, 0.0, half_c, half_c],
        [0.0, 1j * q.M0, half_c, half_c],
        [-half_c, half_c, -1j * s, -1j * d],
        [half_c, -half_c, 1j * d, 1j * s],
    ], dtype=complex)
    return ModeDecomposition(drift=drift)


def _null_vectors(drift: np.ndarray, eigenvalue: complex) -> Tuple[np.ndarray, np.ndarray]:
    """Right and left null vectors of (M − λI) from its smallest singular triple"""
    u, _, vh = linalg.svd(drift - eigenvalue * np.eye(drift.shape[0]))
    return vh[-1].conj(), u[:, -1]


def _fix_phase(left: np.ndarray, right: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Rotate the pair so the largest component of ``right`` is real and positive"""
    pivot = right[int(np.argmax(np.abs(right)))]
    phase = np.conj(pivot) / abs(pivot)
    return left * phase, right * phase


def annihilation_mode(drift: np.ndarray, frequency: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Normalized (left, right) pair of the mode evolving as e^{−iωt}

    Args:
        drift: Drift matrix
        frequency: ω > 0

    Returns:
        (left, right) with (l, r) = 1 and l†ηl = 1

    Raises:
        DegenerateModeError: left and right null vectors are orthogonal
        InstabilityError: the mode has non-positive bosonic norm
    """
    right, left = _null_vectors(drift, -1j * frequency)

    overlap = np.vdot(left, right)
    if abs(overlap) < np.finfo(float).eps:
        raise DegenerateModeError(f"left and right eigenvectors orthogonal at ω = {frequency:g}")
    right = right / overlap

    norm = float(np.real(np.vdot(left, BOSONIC_METRIC @ left)))
    if norm <= 0:
        raise InstabilityError(f"mode at ω = {frequency:g} has non-positive bosonic norm")
    scale = math.sqrt(norm)
    return _fix_phase(left / scale, right * scale)


def mode_decomposition(q: QuadraticCoeffs) -> ModeDecomposition:
    """
    Biorthogonal eigenmodes of the drift matrix

    For each family the annihilation-like mode ρ = (l, R) evolves as e^{−iωt}
    and is normalized to [ρ, ρ†] = l†ηl = 1 with (l, r) = 1. The creation-like
    partner is the swap-conjugate of both vectors.

    Args:
        q: Quadratic coefficients

    Returns:
        ModeDecomposition with modes ordered (+ann, +cre, −ann, −cre)

    Raises:
        InstabilityError: spectrum not stable
        DegenerateModeError: ω₋ ≈ 0 or ω₊ ≈ ω₋
    """
    spectrum = eigenfrequencies(q)
    if not spectrum.stable:
        raise InstabilityError("normal-mode frequencies are complex or imaginary")
    if is_critical(spectrum):
        raise DegenerateModeError("ω₋ = 0: decomposition undefined at the critical point")
    if spectrum.omega_plus - spectrum.omega_minus <= DEGENERACY_TOLERANCE * spectrum.omega_plus:
        raise DegenerateModeError("ω₊ ≈ ω₋: biorthogonal decomposition ill-conditioned")

    drift = drift_matrix(q).drift
    modes = []
    for family, frequency in ((ModeFamily.PLUS, spectrum.omega_plus),
                              (ModeFamily.MINUS, spectrum.omega_minus)):
        left, right = annihilation_mode(drift, frequency)
        modes.append(NormalMode(frequency, left, right, ModeKind.ANNIHILATION, family))
        modes.append(NormalMode(
            -frequency, adjoint_partner(left), adjoint_partner(right), ModeKind.CREATION, family
        ))

    return ModeDecomposition(drift=drift, modes=tuple(modes))


def ground_state_populations(q: QuadraticCoeffs) -> GroundStateStats:
    """
    Photon and atom populations of the normal-mode vacuum

    With R = Σ_k ρ_k r⁽ᵏ⁾ and ⟨ρ_m ρ_m†⟩ = 1 for annihilation-like modes,
    ⟨a†a⟩ = Σ_m |r₂⁽ᵐ⁾|² and ⟨b†b⟩ = Σ_m |r₄⁽ᵐ⁾|².

    Args:
        q: Quadratic coefficients

    Returns:
        GroundStateStats, flagged divergent at the critical point

    Raises:
        InstabilityError: spectrum not stable
    """
    spectrum = eigenfrequencies(q)
    if not spectrum.stable:
        raise InstabilityError("populations undefined for an unstable spectrum")
    if is_critical(spectrum):
        return GroundStateStats.diverging()

    decomposition = mode_decomposition(q)
    n_photon = 0.0
    n_atom = 0.0
    for mode in decomposition.modes:
        if mode.kind is ModeKind.ANNIHILATION:
            n_photon += abs(mode.right[1]) ** 2
            n_atom += abs(mode.right[3]) ** 2
    return GroundStateStats(n_photon=float(n_photon), n_atom=float(n_atom))


def quadrature_hamiltonian(q: QuadraticCoeffs) -> np.ndarray:
    """
    Real symmetric K with H = ½ qᵀ K q + const over (x_a, p_a, x_b, p_b)
    """
    return np.array([
        [q.M0, 0.0, 0.0, 0.0],
        [0.0, q.M0, q.Mc, 0.0],
        [0.0, q.Mc, q.Mx, 0.0],
        [0.0, 0.0, 0.0, q.My],
    ])


def ground_state_covariance(q: QuadraticCoeffs) -> np.ndarray:
    """
    Symmetrized quadrature covariance of the ground state

    V = ½ K^{−1/2} |K^{1/2} iΩ K^{1/2}| K^{−1/2}, with V_ij = ½⟨{q_i, q_j}⟩.

    Args:
        q: Quadratic coefficients

    Returns:
        Real symmetric 4×4 covariance matrix

    Raises:
        InstabilityError: K is not positive definite
    """
    K = quadrature_hamiltonian(q)
    weights, basis = linalg.eigh(K)
    if weights.min() <= 0:
        raise InstabilityError("quadrature Hamiltonian is not positive definite")

    k_half = basis @ np.diag(np.sqrt(weights)) @ basis.T
    k_inv_half = basis @ np.diag(1.0 / np.sqrt(weights)) @ basis.T

    generator = k_half @ (1j * SYMPLECTIC_FORM) @ k_half
    values, vectors = linalg.eigh(generator)
    absolute = vectors @ np.diag(np.abs(values)) @ vectors.conj().T

    covariance = 0.5 * k_inv_half @ absolute @ k_inv_half
    return np.real(covariance)


def williamson_populations(q: QuadraticCoeffs) -> GroundStateStats:
    """
    Populations from the symplectic (Williamson) covariance

    ⟨c†c⟩ = (⟨x²⟩ + ⟨p²⟩ − 1)/2 for each mode.
    """
    spectrum = eigenfrequencies(q)
    if not spectrum.stable:
        raise InstabilityError("populations undefined for an unstable spectrum")
    if is_critical(spectrum):
        return GroundStateStats.diverging()

    V = ground_state_covariance(q)
    return GroundStateStats(
        n_photon=float(0.5 * (V[0, 0] + V[1, 1] - 1.0)),
        n_atom=float(0.5 * (V[2, 2] + V[3, 3] - 1.0)),
    )
