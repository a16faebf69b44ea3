"""
Model Parameters

Maps laboratory inputs onto the reduced two-mode model and checks the
parameter regime in which the two-mode description holds.
"""

import math
from typing import List

try:
    from ..data.models import PhysicalInputs, ReducedParams
    from ..data.errors import RegimeError
    from ..utils import get_logger
except ImportError:
    from data.models import PhysicalInputs, ReducedParams
    from data.errors import RegimeError
    from utils import get_logger


logger = get_logger("params")

# |δ_C| must exceed this multiple of ω_R before the coarse-graining window
# |δ_C|⁻¹ ≪ δt ≪ ω_R⁻¹ exists
SEPARATION_FACTOR = 10.0


def check_regime(r: ReducedParams) -> None:
    """
    Raise on parameters outside the two-mode regime

    Args:
        r: Reduced parameters

    Raises:
        RegimeError: δ_C ≥ 0 or |u| ≥ |δ_C|
    """
    if not r.delta_C < 0:
        raise RegimeError("regime violation: δ_C must be negative")
    if abs(r.u) >= abs(r.delta_C):
        raise RegimeError(
            f"regime violation: |u| < |δ_C| required (|u|={abs(r.u):g}, |δ_C|={abs(r.delta_C):g})"
        )


def reduce_parameters(p: PhysicalInputs) -> ReducedParams:
    """
    Convert laboratory parameters into the reduced model frequencies

    U_0 = g_0²/Δ_A, η_t = Ω g_0/Δ_A, u = N U_0/4, y = √(2N)|η_t|,
    δ_C = Δ_C − 2u. The sign of η_t is a photon phase convention and is
    dropped.

    Args:
        p: Physical inputs

    Returns:
        ReducedParams in the units of the inputs, carrying N

    Raises:
        RegimeError: the result violates δ_C < 0 or |u| < |δ_C|
    """
    U0 = p.single_photon_rabi ** 2 / p.atom_pump_detuning
    eta_t = p.pump_rabi * p.single_photon_rabi / p.atom_pump_detuning
    u = p.atom_number * U0 / 4.0
    y = abs(math.sqrt(2.0 * p.atom_number) * eta_t)
    delta_C = p.cavity_pump_detuning - 2.0 * u

    if not delta_C < 0:
        raise RegimeError(
            f"regime violation: δ_C must be negative (δ_C = Δ_C − 2u = {delta_C:g})"
        )

    reduced = ReducedParams(
        omega_R=p.omega_R,
        delta_C=delta_C,
        u=u,
        y=y,
        kappa=p.photon_loss,
        N=p.atom_number,
    )
    check_regime(reduced)

    logger.debug(
        f"Reduced parameters: δ_C={delta_C:.6g}, u={u:.6g}, y={y:.6g}, "
        f"ω_R={p.omega_R:.6g}"
    )
    return reduced


def validate_regime(r: ReducedParams, coarse_grained: bool = True,
                    separation_factor: float = SEPARATION_FACTOR) -> List[str]:
    """
    Collect warnings about the validity of the approximations

    Args:
        r: Reduced parameters
        coarse_grained: Whether a coarse-grained diffusion rate is requested
        separation_factor: Minimum |δ_C|/ω_R regarded as "much larger"

    Returns:
        List of human-readable warnings (empty when everything holds)
    """
    warnings = []

    if abs(r.u) >= abs(r.delta_C):
        warnings.append(
            "|u| >= |δ_C|: two-mode truncation invalid, the c2 cos 2kx mode "
            "can no longer be neglected"
        )

    if coarse_grained and abs(r.delta_C) < separation_factor * r.omega_R:
        warnings.append(
            f"|δ_C| not >> ω_R (|δ_C|/ω_R = {abs(r.delta_C) / r.omega_R:g}): "
            "no coarse-graining window between |δ_C|⁻¹ and ω_R⁻¹"
        )

    if r.kappa >= abs(r.delta_C):
        warnings.append(
            "κ >= |δ_C|: adiabatic elimination of the photon field is questionable"
        )

    return warnings
