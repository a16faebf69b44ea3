"""
Mean-Field Order Parameters

Solves the stationarity conditions of the displaced frame for the photon and
atomic order parameters and classifies the phase. With α = i√N·alpha0 and
β = √N·beta0 the conditions read

    (δ_C − u β0²) α0 = y β0 √(1−β0²)
    (ω_R + u α0²) β0 + y α0 (1−2β0²)/√(1−β0²) = 0

Eliminating α0 leaves a quadratic equation for β0² whose smaller root is the
physical one.
"""

import math
from typing import Tuple

try:
    from ..data.models import ReducedParams, MeanFieldSolution, Phase
    from ..data.errors import RegimeError, ConsistencyError, SingularInputError
    from ..utils import get_logger
except ImportError:
    from data.models import ReducedParams, MeanFieldSolution, Phase
    from data.errors import RegimeError, ConsistencyError, SingularInputError
    from utils import get_logger


logger = get_logger("meanfield")

RESIDUAL_TOLERANCE = 1e-10


def critical_coupling(r: ReducedParams) -> float:
    """
    Pump coupling at the superradiant threshold

    Args:
        r: Reduced parameters

    Returns:
        y_crit = √(−δ_C ω_R)

    Raises:
        RegimeError: δ_C ≥ 0
    """
    if not r.delta_C < 0:
        raise RegimeError("regime violation: δ_C must be negative")
    return math.sqrt(-r.delta_C * r.omega_R)


def _superradiant_beta_sq(r: ReducedParams) -> float:
    """
    Smaller root of u b² − 2δ_C b + δ_C c = 0 with c = (δ_C ω_R + y²)/(u ω_R + y²)

    Written as b = c / (1 + √(1 − (u/δ_C) c)), which is free of the 0/0 at u = 0.
    """
    denominator = r.u * r.omega_R + r.y ** 2
    if denominator <= 0:
        raise RegimeError(
            f"regime violation: u ω_R + y² must be positive (got {denominator:g})"
        )
    c = (r.delta_C * r.omega_R + r.y ** 2) / denominator
    discriminant = 1.0 - (r.u / r.delta_C) * c
    if discriminant < 0:
        raise RegimeError(
            f"regime violation: no real superradiant solution (discriminant {discriminant:g})"
        )
    return c / (1.0 + math.sqrt(discriminant))


def solve_displacements(r: ReducedParams) -> MeanFieldSolution:
    """
    Solve the mean-field conditions for (alpha0, beta0)

    The Normal solution is returned for y ≤ y_crit, including y = y_crit.
    Above threshold beta0 is taken non-negative; the Z₂ partner is available
    through ``symmetry_partner``.

    Args:
        r: Reduced parameters

    Returns:
        MeanFieldSolution with the residuals of both conditions

    Raises:
        RegimeError: the closed form has no real root
        ConsistencyError: beta0² leaves (0, 1] or a residual exceeds tolerance
    """
    y_crit = critical_coupling(r)
    excess = r.y ** 2 + r.delta_C * r.omega_R
    if r.y <= y_crit or excess <= 0:
        return MeanFieldSolution.normal()

    beta_sq = _superradiant_beta_sq(r)
    if not 0.0 < beta_sq <= 1.0:
        raise ConsistencyError(f"beta0² = {beta_sq!r} outside (0, 1]")

    beta0 = math.sqrt(beta_sq)
    alpha0 = r.y * beta0 * math.sqrt(1.0 - beta_sq) / (r.delta_C - r.u * beta_sq)

    res_a, res_b = _residuals(r, alpha0, beta0)
    scale = max(1.0, abs(r.delta_C), r.y, r.omega_R)
    if max(abs(res_a), abs(res_b)) > RESIDUAL_TOLERANCE * scale:
        raise ConsistencyError(
            f"mean-field residuals too large: ({res_a:.3e}, {res_b:.3e})"
        )

    return MeanFieldSolution(
        alpha0=alpha0,
        beta0=beta0,
        phase=Phase.SUPERRADIANT,
        residual_a=res_a,
        residual_b=res_b,
    )


def _residuals(r: ReducedParams, alpha0: float, beta0: float) -> Tuple[float, float]:
    beta_sq = beta0 * beta0
    if beta_sq >= 1.0:
        raise SingularInputError("beta0² = 1: the 1/√(1−β0²) factor is singular")
    root = math.sqrt(1.0 - beta_sq)
    res_a = (r.delta_C - r.u * beta_sq) * alpha0 - r.y * beta0 * root
    res_b = (r.omega_R + r.u * alpha0 * alpha0) * beta0 + r.y * alpha0 * (1.0 - 2.0 * beta_sq) / root
    return res_a, res_b


def meanfield_residuals(r: ReducedParams, s: MeanFieldSolution) -> Tuple[float, float]:
    """
    Left-minus-right of both stationarity conditions

    Args:
        r: Reduced parameters
        s: Candidate solution

    Returns:
        (residual of the photon condition, residual of the atom condition)

    Raises:
        SingularInputError: beta0² = 1
    """
    return _residuals(r, s.alpha0, s.beta0)


def quartic_residual(r: ReducedParams, beta_sq: float) -> float:
    """
    Residual of the quadratic equation in β0², divided by δ_C

    (u/δ_C) b² − 2b + c with c = (δ_C ω_R + y²)/(u ω_R + y²).
    """
    c = (r.delta_C * r.omega_R + r.y ** 2) / (r.u * r.omega_R + r.y ** 2)
    return (r.u / r.delta_C) * beta_sq ** 2 - 2.0 * beta_sq + c


def meanfield_energy(r: ReducedParams, alpha0: float, beta0: float) -> float:
    """
    Energy per atom of the displaced product state

    Measured from the S_z = −N/2 reference:
    E/N = −δ_C α0² + ω_R β0² + u α0² β0² + 2 y α0 β0 √(1−β0²).
    Its stationary points are exactly the solutions of ``solve_displacements``.

    Args:
        r: Reduced parameters
        alpha0: Photon amplitude per √N
        beta0: Atomic amplitude per √N

    Returns:
        Energy per atom

    Raises:
        SingularInputError: beta0² > 1
    """
    beta_sq = beta0 * beta0
    if beta_sq > 1.0:
        raise SingularInputError("beta0² > 1 has no physical state")
    alpha_sq = alpha0 * alpha0
    return (
        -r.delta_C * alpha_sq
        + r.omega_R * beta_sq
        + r.u * alpha_sq * beta_sq
        + 2.0 * r.y * alpha0 * beta0 * math.sqrt(1.0 - beta_sq)
    )


def symmetry_partner(s: MeanFieldSolution) -> MeanFieldSolution:
    """Z₂ image (−alpha0, −beta0) of a solution"""
    if s.phase is Phase.NORMAL:
        return s
    return MeanFieldSolution(
        alpha0=-s.alpha0,
        beta0=-s.beta0,
        phase=s.phase,
        residual_a=-s.residual_a,
        residual_b=-s.residual_b,
    )
