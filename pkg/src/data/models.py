"""
Data Models for the Dicke-Model Toolkit

This module defines the records passed between the physics modules, the
sweep manager and the CSV layer. Each record is a dataclass; validation of
the simple invariants happens in ``__post_init__``.

Units: ħ = 1, all frequencies are angular frequencies. Inside the sweep
pipeline every frequency is expressed in units of ω_R.
"""

from dataclasses import dataclass, field, asdict, replace
from enum import Enum
from typing import Optional, Dict, Any, List, Tuple
import math

import numpy as np
from scipy.constants import hbar

from .errors import ConfigurationError, RegimeError


class Phase(Enum):
    """Phase of the mean-field ground state"""
    NORMAL = "normal"
    SUPERRADIANT = "superradiant"


class ModeKind(Enum):
    """Whether a normal mode evolves as e^{-iωt} (annihilation) or e^{+iωt}"""
    ANNIHILATION = "annihilation"
    CREATION = "creation"


class ModeFamily(Enum):
    """Normal-mode oscillator a mode belongs to"""
    PLUS = "plus"
    MINUS = "minus"


class PointFlag(Enum):
    """Conditions reported in the ``flags`` column of a sweep row"""
    UNSTABLE = "unstable"
    CRITICAL = "critical"
    DIVERGENT = "divergent_populations"
    UNCONVERGED = "unconverged_cutoff"


@dataclass(frozen=True)
class PhysicalInputs:
    """
    Laboratory parameters of the pumped BEC-cavity system

    Either ``recoil`` or both ``mass`` and ``wavenumber`` (SI units, giving
    ω_R = ħk²/2m in rad/s) must be supplied. All frequencies share one unit.
    """
    atom_pump_detuning: float
    cavity_pump_detuning: float
    single_photon_rabi: float
    pump_rabi: float
    atom_number: int
    recoil: Optional[float] = None
    mass: Optional[float] = None
    wavenumber: Optional[float] = None
    photon_loss: float = 0.0

    def __post_init__(self):
        """Validate data after initialization"""
        if not self.atom_pump_detuning < 0:
            raise RegimeError("regime violation: Δ_A must be negative (red detuning)")
        if self.atom_number < 1:
            raise ConfigurationError("atom number N must be at least 1")
        if self.photon_loss < 0:
            raise ConfigurationError("photon loss κ must be non-negative")

        derived = self.derived_recoil
        if self.recoil is None and derived is None:
            raise ConfigurationError("either recoil or mass and wavenumber must be given")
        if self.recoil is not None and derived is not None:
            if not math.isclose(self.recoil, derived, rel_tol=1e-9):
                raise ConfigurationError(
                    f"recoil {self.recoil} disagrees with ħk²/2m = {derived}"
                )
        if not self.omega_R > 0:
            raise ConfigurationError("recoil frequency ω_R must be positive")

    @property
    def derived_recoil(self) -> Optional[float]:
        """ħk²/2m when mass and wavenumber are set"""
        if self.mass is None or self.wavenumber is None:
            return None
        if self.mass <= 0:
            raise ConfigurationError("mass must be positive")
        return hbar * self.wavenumber ** 2 / (2.0 * self.mass)

    @property
    def omega_R(self) -> float:
        """Recoil frequency, explicit or derived"""
        return self.recoil if self.recoil is not None else self.derived_recoil

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        return asdict(self)


@dataclass(frozen=True)
class ReducedParams:
    """
    The five model frequencies of the two-mode Hamiltonian

    ``N`` is only read by the exact-diagonalization oracle.
    """
    omega_R: float
    delta_C: float
    u: float = 0.0
    y: float = 0.0
    kappa: float = 0.0
    N: Optional[int] = None

    def __post_init__(self):
        """Validate data after initialization"""
        if not self.omega_R > 0:
            raise ConfigurationError("recoil frequency ω_R must be positive")
        if not self.delta_C < 0:
            raise RegimeError("regime violation: δ_C must be negative")
        if self.y < 0:
            raise ConfigurationError("pump coupling y must be non-negative")
        if self.kappa < 0:
            raise ConfigurationError("photon loss κ must be non-negative")
        if self.N is not None and self.N < 1:
            raise ConfigurationError("atom number N must be at least 1")

    def in_recoil_units(self) -> 'ReducedParams':
        """Same parameters with every frequency divided by ω_R"""
        scale = self.omega_R
        return replace(
            self,
            omega_R=1.0,
            delta_C=self.delta_C / scale,
            u=self.u / scale,
            y=self.y / scale,
            kappa=self.kappa / scale,
        )

    def with_y(self, y: float) -> 'ReducedParams':
        """Copy with a different pump coupling"""
        return replace(self, y=y)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        return asdict(self)


@dataclass(frozen=True)
class MeanFieldSolution:
    """
    Displaced-frame order parameters

    The photon displacement is α = i√N·alpha0, the atomic one β = √N·beta0.
    """
    alpha0: float
    beta0: float
    phase: Phase
    residual_a: float = 0.0
    residual_b: float = 0.0

    def __post_init__(self):
        """Validate data after initialization"""
        if self.phase is Phase.NORMAL and (self.alpha0 != 0.0 or self.beta0 != 0.0):
            raise ValueError("normal-phase solution must have alpha0 = beta0 = 0")
        if self.phase is Phase.SUPERRADIANT and not 0.0 < self.beta0 ** 2 <= 1.0:
            raise ValueError("superradiant solution needs 0 < beta0² <= 1")

    @property
    def alpha0_sq(self) -> float:
        return self.alpha0 ** 2

    @property
    def beta0_sq(self) -> float:
        return self.beta0 ** 2

    @classmethod
    def normal(cls) -> 'MeanFieldSolution':
        """The trivial homogeneous solution"""
        return cls(alpha0=0.0, beta0=0.0, phase=Phase.NORMAL)

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        data = asdict(self)
        data['phase'] = self.phase.value
        return data


@dataclass(frozen=True)
class QuadraticCoeffs:
    """Coefficients of the quadratic fluctuation Hamiltonian"""
    M0: float
    Mx: float
    My: float
    Mc: float

    @property
    def squeezing_coefficient(self) -> float:
        """Prefactor (Mx − My)/4 of the single-mode squeezing term of b"""
        return (self.Mx - self.My) / 4.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class NormalModeSpectrum:
    """Eigenfrequencies ω± of the quadratic Hamiltonian"""
    omega_plus: float
    omega_minus: float
    stable: bool
    omega_plus_sq: complex = 0.0
    omega_minus_sq: complex = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            'omega_plus': self.omega_plus,
            'omega_minus': self.omega_minus,
            'stable': self.stable,
        }


@dataclass(frozen=True, eq=False)
class NormalMode:
    """
    One eigenmode of the drift matrix

    ``frequency`` is signed: the mode evolves as e^{-i·frequency·t}.
    ``left`` and ``right`` are complex 4-vectors over [a, a†, b, b†] with
    ρ_k = (left, R) and R = Σ_k ρ_k right_k.
    """
    frequency: float
    left: np.ndarray
    right: np.ndarray
    kind: ModeKind
    family: ModeFamily

    @property
    def projector(self) -> np.ndarray:
        """Spectral projector r l†"""
        return np.outer(self.right, self.left.conj())


@dataclass(frozen=True, eq=False)
class ModeDecomposition:
    """Drift matrix of the fluctuation operators and its biorthogonal eigenmodes"""
    drift: np.ndarray
    modes: Tuple[NormalMode, ...] = field(default_factory=tuple)

    def mode(self, family: ModeFamily, kind: ModeKind = ModeKind.ANNIHILATION) -> NormalMode:
        """Look up a mode by family and kind"""
        for candidate in self.modes:
            if candidate.family is family and candidate.kind is kind:
                return candidate
        raise KeyError(f"no {kind.value} mode in the {family.value} family")

    @property
    def frequencies(self) -> np.ndarray:
        return np.array([m.frequency for m in self.modes])

    @property
    def left_matrix(self) -> np.ndarray:
        """Left eigenvectors as columns"""
        return np.column_stack([m.left for m in self.modes])

    @property
    def right_matrix(self) -> np.ndarray:
        """Right eigenvectors as columns"""
        return np.column_stack([m.right for m in self.modes])

    def projectors(self) -> List[Tuple[float, np.ndarray]]:
        """(frequency, projector) for every mode"""
        return [(m.frequency, m.projector) for m in self.modes]

    def biorthogonality_residual(self) -> float:
        """max |(l_k, r_l) − δ_kl|"""
        overlap = self.left_matrix.conj().T @ self.right_matrix
        return float(np.max(np.abs(overlap - np.eye(len(self.modes)))))

    def completeness_residual(self) -> float:
        """max |Σ_k r_i l_j* − δ_ij|"""
        total = self.right_matrix @ self.left_matrix.conj().T
        return float(np.max(np.abs(total - np.eye(total.shape[0]))))


@dataclass(frozen=True)
class GroundStateStats:
    """Incoherent populations of the displaced-frame ground state"""
    n_photon: float
    n_atom: float
    divergent: bool = False

    @classmethod
    def diverging(cls) -> 'GroundStateStats':
        return cls(n_photon=math.inf, n_atom=math.inf, divergent=True)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class DiffusionRates:
    """
    Depletion rates of the ground state

    ``rate_modes`` is nan at the critical point, where it diverges.
    """
    rate_modes: float
    rate_populations: float
    rate_adiabatic: float
    delta_t: float

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class SpinPhotonBasis:
    """
    Product basis |n⟩ ⊗ |m⟩ of photon number and c₁-mode occupation

    The flat index is n·(N+1) + m and S_z = m − N/2.
    """
    N: int
    n_max: int

    def __post_init__(self):
        """Validate data after initialization"""
        if self.N < 1:
            raise ConfigurationError("atom number N must be at least 1")
        if self.n_max < 1:
            raise ConfigurationError("photon cutoff n_max must be at least 1")

    @property
    def dimension(self) -> int:
        return (self.N + 1) * (self.n_max + 1)

    def index(self, n: int, m: int) -> int:
        return n * (self.N + 1) + m

    def state(self, index: int) -> Tuple[int, int]:
        return divmod(index, self.N + 1)

    @property
    def photon_numbers(self) -> np.ndarray:
        return np.repeat(np.arange(self.n_max + 1), self.N + 1)

    @property
    def atom_occupations(self) -> np.ndarray:
        return np.tile(np.arange(self.N + 1), self.n_max + 1)

    @property
    def sz_values(self) -> np.ndarray:
        return self.atom_occupations - self.N / 2.0

    def parity_indices(self, parity: int) -> np.ndarray:
        """Flat indices of the sector with (−1)^{n+m} = parity"""
        total = self.photon_numbers + self.atom_occupations
        wanted = 0 if parity > 0 else 1
        return np.flatnonzero(total % 2 == wanted)

    def doubled(self) -> 'SpinPhotonBasis':
        """Same atom number with twice the photon cutoff"""
        return SpinPhotonBasis(N=self.N, n_max=2 * self.n_max)


@dataclass
class EDResult:
    """
    Finite-N ground-state observables from exact diagonalization

    ``gap`` is the first excitation energy over the whole spectrum;
    ``same_parity_gap`` the first excitation inside the ground-state parity
    sector.
    """
    N: int
    n_max: int
    ground_energy: float
    gap: float
    same_parity_gap: float
    mean_photon: float
    n_photon_per_N: float
    sz_per_N: float
    order_param_beta2: float
    parity_expectation: float
    converged: bool = True

    def __post_init__(self):
        """Validate data after initialization"""
        if not -1e-12 <= self.order_param_beta2 <= 1.0 + 1e-12:
            raise ValueError("order_param_beta2 must lie in [0, 1]")

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        return asdict(self)


@dataclass
class FiniteSizeScan:
    """ED results over several atom numbers and their 1/N → 0 extrapolation"""
    rows: List[EDResult] = field(default_factory=list)
    extrapolated: Dict[str, float] = field(default_factory=dict)

    @property
    def converged_rows(self) -> List[EDResult]:
        return [row for row in self.rows if row.converged]


@dataclass
class SweepPoint:
    """
    One row of the sweep CSV

    Undefined quantities are nan; ``flags`` names the reason.
    """
    y: float
    y_over_ycrit: float
    alpha0: float = math.nan
    beta0: float = math.nan
    alpha0_sq: float = math.nan
    beta0_sq: float = math.nan
    M0: float = math.nan
    Mx: float = math.nan
    My: float = math.nan
    Mc: float = math.nan
    omega_plus: float = math.nan
    omega_minus: float = math.nan
    n_photon_incoh: float = math.nan
    n_atom_incoh: float = math.nan
    rate_modes: float = math.nan
    rate_populations: float = math.nan
    rate_adiabatic: float = math.nan
    flags: List[str] = field(default_factory=list)

    def add_flag(self, flag: PointFlag) -> None:
        if flag.value not in self.flags:
            self.flags.append(flag.value)

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


SWEEP_COLUMNS = [
    'y', 'y_over_ycrit', 'alpha0', 'beta0', 'alpha0_sq', 'beta0_sq',
    'M0', 'Mx', 'My', 'Mc', 'omega_plus', 'omega_minus',
    'n_photon_incoh', 'n_atom_incoh',
    'rate_modes', 'rate_populations', 'rate_adiabatic',
    'flags',
]

ORACLE_COLUMNS = [
    'N', 'y', 'y_over_ycrit', 'n_max', 'ed_converged',
    'beta0_sq', 'ed_beta2', 'diff_beta2',
    'alpha0_sq', 'ed_n_photon_per_N', 'diff_photon',
    'omega_minus', 'ed_gap', 'ed_same_parity_gap', 'diff_gap',
    'n_photon_incoh', 'ed_incoherent_photon',
    'meanfield_energy_per_N', 'ed_ground_energy_per_N',
    'flags',
]


@dataclass
class CheckResult:
    """Outcome of one invariant check of the validation suite"""
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
