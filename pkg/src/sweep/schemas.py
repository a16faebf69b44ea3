"""
Sweep configuration schemas.

JSON sweep documents are validated with pydantic; unknown keys are rejected.
All frequencies of one document share a single unit; the sweep converts them
to units of ω_R before computing.
"""
import json
from typing import Any, Dict, List, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

try:
    from ..data.models import PhysicalInputs, ReducedParams
    from ..data.errors import ConfigurationError
    from ..physics.params import reduce_parameters, check_regime
except ImportError:
    from data.models import PhysicalInputs, ReducedParams
    from data.errors import ConfigurationError
    from physics.params import reduce_parameters, check_regime


class GridSpec(BaseModel):
    """Pump-coupling grid."""
    model_config = ConfigDict(extra="forbid")

    min: float = Field(0.0, ge=0.0)
    max: float = 2.0
    points: int = Field(401, ge=2)
    scale: Literal["absolute", "y_over_ycrit"] = "y_over_ycrit"

    @model_validator(mode="after")
    def _ordered(self) -> "GridSpec":
        if not self.min < self.max:
            raise ValueError(f"grid min ({self.min}) must be below max ({self.max})")
        return self

    def values(self) -> np.ndarray:
        """Grid values in the grid's own scale."""
        return np.linspace(self.min, self.max, self.points)


class NMaxRule(BaseModel):
    """Photon cutoff rule max(minimum, ceil(photon_factor·Nα0² + spread_factor·√(Nα0²+1)))."""
    model_config = ConfigDict(extra="forbid")

    minimum: int = Field(40, ge=1)
    photon_factor: float = Field(8.0, ge=0.0)
    spread_factor: float = Field(10.0, ge=0.0)


class OracleSpec(BaseModel):
    """Exact-diagonalization comparison block."""
    model_config = ConfigDict(extra="forbid")

    N_list: List[int] = Field(..., min_length=1)
    n_max_rule: NMaxRule = Field(default_factory=NMaxRule)
    y_points: List[float] = Field(default_factory=lambda: [0.0, 0.5, 2.0], min_length=1)

    @model_validator(mode="after")
    def _positive_atoms(self) -> "OracleSpec":
        if any(N < 1 for N in self.N_list):
            raise ValueError("every atom number in N_list must be at least 1")
        if any(y < 0 for y in self.y_points):
            raise ValueError("oracle y_points must be non-negative")
        return self


class PhysicalInputsSpec(BaseModel):
    """Laboratory parameters, alternative to the reduced keys."""
    model_config = ConfigDict(extra="forbid")

    atom_pump_detuning: float
    cavity_pump_detuning: float
    single_photon_rabi: float
    pump_rabi: float
    atom_number: int = Field(..., ge=1)
    recoil: Optional[float] = None
    mass: Optional[float] = None
    wavenumber: Optional[float] = None


# Keys replaced by a physical block
REDUCED_KEYS = frozenset({'omega_R', 'delta_C', 'u'})


class SweepConfig(BaseModel):
    """Complete sweep document."""
    model_config = ConfigDict(extra="forbid")

    omega_R: float = Field(1.0, gt=0.0)
    delta_C: Optional[float] = None
    u: float = 0.0
    kappa: float = Field(1.0, ge=0.0)
    physical: Optional[PhysicalInputsSpec] = None
    y_grid: GridSpec = Field(default_factory=GridSpec)
    coarse_grain_dt: Optional[float] = Field(None, gt=0.0)
    oracle: Optional[OracleSpec] = None
    output: Optional[str] = None

    @model_validator(mode="after")
    def _one_parameter_source(self) -> "SweepConfig":
        if self.physical is None and self.delta_C is None:
            raise ValueError("delta_C is required unless a physical block is given")
        reduced_keys = sorted(self.model_fields_set & REDUCED_KEYS)
        if self.physical is not None and reduced_keys:
            raise ValueError(
                f"give either delta_C/u/omega_R or a physical block, not both (got {', '.join(reduced_keys)})"
            )
        return self

    def reduced_params(self) -> ReducedParams:
        """
        Reduced parameters of the document, y = 0, in the document's units.

        Raises:
            RegimeError: a model inequality is violated
        """
        if self.physical is not None:
            inputs = PhysicalInputs(**self.physical.model_dump(), photon_loss=self.kappa)
            return reduce_parameters(inputs)

        reduced = ReducedParams(
            omega_R=self.omega_R,
            delta_C=self.delta_C,
            u=self.u,
            kappa=self.kappa,
        )
        check_regime(reduced)
        return reduced

    def with_overrides(self, kappa: Optional[float] = None, coarse_grain_dt: Optional[float] = None,
                       output: Optional[str] = None) -> "SweepConfig":
        """Copy with command-line overrides applied and re-validated."""
        data = self.model_dump(exclude_unset=True)
        if kappa is not None:
            data['kappa'] = kappa
        if coarse_grain_dt is not None:
            data['coarse_grain_dt'] = coarse_grain_dt
        if output is not None:
            data['output'] = output
        return parse_config_data(data)


def _describe(error: ValidationError) -> str:
    parts = []
    for item in error.errors():
        location = ".".join(str(part) for part in item.get('loc', ())) or "config"
        parts.append(f"{location}: {item.get('msg')}")
    return "; ".join(parts)


def parse_config_data(data: Dict[str, Any]) -> SweepConfig:
    """
    Validate an already decoded sweep document.

    Raises:
        ConfigurationError: structural problems or unknown keys
        RegimeError: a model inequality is violated
    """
    if not isinstance(data, dict):
        raise ConfigurationError("sweep config must be a JSON object")
    try:
        config = SweepConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigurationError(f"invalid sweep config: {_describe(e)}")

    config.reduced_params()
    return config


def parse_config(text: Union[str, bytes]) -> SweepConfig:
    """
    Parse a JSON sweep document with defaults applied.

    Args:
        text: JSON text

    Returns:
        Validated SweepConfig

    Raises:
        ConfigurationError: malformed JSON or invalid document
        RegimeError: a model inequality is violated
    """
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"malformed JSON: {e}")
    return parse_config_data(data)
