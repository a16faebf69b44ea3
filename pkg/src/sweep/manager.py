"""
Sweep Manager

Evaluates the thermodynamic-limit pipeline over a pump-coupling grid and
joins it with exact-diagonalization results for the oracle comparison.
Grid points run on a thread pool; ``Executor.map`` keeps the input order so
the output does not depend on the number of workers.
"""

import math
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

try:
    from ..data.models import ReducedParams, SweepPoint, PointFlag, SWEEP_COLUMNS, ORACLE_COLUMNS
    from ..data.errors import ConfigurationError, InstabilityError, DegenerateModeError
    from ..data.csv_store import CSVStore
    from ..physics.params import validate_regime
    from ..physics.meanfield import critical_coupling, solve_displacements, meanfield_energy
    from ..physics.fluctuations import (
        quadratic_coefficients, eigenfrequencies, is_critical, ground_state_populations,
    )
    from ..physics.diffusion import diffusion_rates, default_coarse_grain_dt
    from ..physics.oracle import ExactDiagonalizer, default_n_max
    from ..utils import get_logger, format_duration
    from .schemas import SweepConfig
except ImportError:
    from data.models import ReducedParams, SweepPoint, PointFlag, SWEEP_COLUMNS, ORACLE_COLUMNS
    from data.errors import ConfigurationError, InstabilityError, DegenerateModeError
    from data.csv_store import CSVStore
    from physics.params import validate_regime
    from physics.meanfield import critical_coupling, solve_displacements, meanfield_energy
    from physics.fluctuations import (
        quadratic_coefficients, eigenfrequencies, is_critical, ground_state_populations,
    )
    from physics.diffusion import diffusion_rates, default_coarse_grain_dt
    from physics.oracle import ExactDiagonalizer, default_n_max
    from utils import get_logger, format_duration
    from sweep.schemas import SweepConfig


class SweepManager:
    """
    Runs sweeps and oracle comparisons for one configuration

    Responsibilities:
    - Convert the configuration to ω_R units
    - Evaluate grid points in parallel with order-preserving collection
    - Turn physical-domain conditions into flags and nan cells
    - Write the CSV tables
    """

    def __init__(self, config: SweepConfig, settings: Optional[Dict[str, Any]] = None,
                 max_workers: Optional[int] = None):
        """
        Initialize sweep manager

        Args:
            config: Validated sweep configuration
            settings: Application settings (``oracle`` and ``sweep`` sections are read)
            max_workers: Thread count (defaults to sweep.max_workers, then 1)
        """
        self.logger = get_logger("manager")
        self.config = config
        self.settings = settings or {}

        sweep_settings = self.settings.get('sweep', {})
        self.max_workers = max_workers or sweep_settings.get('max_workers') or 1

        self.params: ReducedParams = config.reduced_params().in_recoil_units()
        self.y_crit = critical_coupling(self.params)
        self.delta_t = (
            config.coarse_grain_dt * config.reduced_params().omega_R
            if config.coarse_grain_dt is not None
            else default_coarse_grain_dt(self.params)
        )
        self.store = CSVStore()

    def _to_recoil_y(self, value: float) -> float:
        """Grid value (in the grid's scale) → y in units of ω_R"""
        if self.config.y_grid.scale == "y_over_ycrit":
            return float(value) * self.y_crit
        return float(value) / self.config.reduced_params().omega_R

    def grid(self) -> np.ndarray:
        """Pump couplings of the sweep in units of ω_R"""
        return np.array([self._to_recoil_y(v) for v in self.config.y_grid.values()])

    def _log_regime_warnings(self) -> None:
        for warning in validate_regime(self.params):
            self.logger.warning(warning)

    def evaluate_point(self, y: float) -> SweepPoint:
        """
        All sweep columns at one pump coupling

        Args:
            y: Pump coupling in units of ω_R

        Returns:
            SweepPoint; undefined cells stay nan and ``flags`` names why
        """
        params = self.params.with_y(y)
        point = SweepPoint(y=y, y_over_ycrit=y / self.y_crit)

        solution = solve_displacements(params)
        point.alpha0 = solution.alpha0
        point.beta0 = solution.beta0
        point.alpha0_sq = solution.alpha0_sq
        point.beta0_sq = solution.beta0_sq

        q = quadratic_coefficients(params, solution)
        point.M0, point.Mx, point.My, point.Mc = q.M0, q.Mx, q.My, q.Mc

        spectrum = eigenfrequencies(q)
        if not spectrum.stable:
            point.add_flag(PointFlag.UNSTABLE)
            return point
        point.omega_plus = spectrum.omega_plus
        point.omega_minus = spectrum.omega_minus

        if is_critical(spectrum):
            point.add_flag(PointFlag.CRITICAL)
            point.add_flag(PointFlag.DIVERGENT)
        else:
            try:
                populations = ground_state_populations(q)
                point.n_photon_incoh = populations.n_photon
                point.n_atom_incoh = populations.n_atom
            except DegenerateModeError:
                point.add_flag(PointFlag.CRITICAL)
            except InstabilityError:
                point.add_flag(PointFlag.UNSTABLE)
                return point

        try:
            rates = diffusion_rates(q, params, params.kappa, self.delta_t)
        except (InstabilityError, DegenerateModeError):
            point.add_flag(PointFlag.UNSTABLE)
            return point
        point.rate_modes = rates.rate_modes
        point.rate_populations = rates.rate_populations
        point.rate_adiabatic = rates.rate_adiabatic
        return point

    def run_sweep(self) -> List[SweepPoint]:
        """
        Evaluate every grid point

        Returns:
            SweepPoints in grid order
        """
        self.logger.info("=" * 60)
        self.logger.info("Starting sweep")
        self.logger.info("=" * 60)
        self._log_regime_warnings()

        start_time = time.time()
        ys = self.grid()
        self.logger.info(
            f"δ_C={self.params.delta_C:g} ω_R, u={self.params.u:g} ω_R, κ={self.params.kappa:g} ω_R, "
            f"y_crit={self.y_crit:.6g} ω_R, δt={self.delta_t:.6g}/ω_R, {len(ys)} points, "
            f"{self.max_workers} worker(s)"
        )

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            points = list(executor.map(self.evaluate_point, ys))

        flagged = sum(1 for p in points if p.flags)
        self.logger.info("=" * 60)
        self.logger.info("Sweep Summary")
        self.logger.info("=" * 60)
        self.logger.info(f"Points evaluated: {len(points)}")
        self.logger.info(f"Flagged points: {flagged}")
        self.logger.info(f"Duration: {format_duration(time.time() - start_time)}")
        self.logger.info("=" * 60)
        return points

    def _oracle_settings(self) -> Dict[str, Any]:
        settings = dict(self.settings.get('oracle', {}) or {})
        settings['n_max_rule'] = self.config.oracle.n_max_rule.model_dump()
        return settings

    def _oracle_row(self, job: Tuple[float, int]) -> Dict[str, Any]:
        y, N = job
        params = self.params.with_y(y)
        solution = solve_displacements(params)
        q = quadratic_coefficients(params, solution)
        spectrum = eigenfrequencies(q)

        flags: List[str] = []
        n_photon_incoh = math.nan
        if not spectrum.stable:
            flags.append(PointFlag.UNSTABLE.value)
        elif is_critical(spectrum):
            flags.extend([PointFlag.CRITICAL.value, PointFlag.DIVERGENT.value])
        else:
            n_photon_incoh = ground_state_populations(q).n_photon

        oracle = ExactDiagonalizer(params, self._oracle_settings())
        n_max = default_n_max(N, solution.alpha0_sq, oracle.settings['n_max_rule'])
        result = oracle.solve(N, n_max)
        if not result.converged:
            flags.append(PointFlag.UNCONVERGED.value)

        # above threshold the lowest doublet is the symmetry-broken pair
        ed_soft_gap = result.gap if solution.alpha0_sq == 0.0 else result.same_parity_gap
        energy_per_N = meanfield_energy(params, solution.alpha0, solution.beta0) - 0.5 * params.omega_R

        return {
            'N': N,
            'y': y,
            'y_over_ycrit': y / self.y_crit,
            'n_max': n_max,
            'ed_converged': result.converged,
            'beta0_sq': solution.beta0_sq,
            'ed_beta2': result.order_param_beta2,
            'diff_beta2': abs(result.order_param_beta2 - solution.beta0_sq),
            'alpha0_sq': solution.alpha0_sq,
            'ed_n_photon_per_N': result.n_photon_per_N,
            'diff_photon': abs(result.n_photon_per_N - solution.alpha0_sq),
            'omega_minus': spectrum.omega_minus,
            'ed_gap': result.gap,
            'ed_same_parity_gap': result.same_parity_gap,
            'diff_gap': abs(ed_soft_gap - spectrum.omega_minus),
            'n_photon_incoh': n_photon_incoh,
            'ed_incoherent_photon': result.mean_photon - N * solution.alpha0_sq,
            'meanfield_energy_per_N': energy_per_N,
            'ed_ground_energy_per_N': result.ground_energy / N,
            'flags': flags,
            '_result': result,
        }

    def _extrapolated_row(self, y: float, rows: List[Dict[str, Any]]) -> Dict[str, Any]:
        """1/N → 0 row over the converged rows of one pump coupling"""
        converged = [row for row in rows if row['ed_converged']]
        params = self.params.with_y(y)
        oracle = ExactDiagonalizer(params, self._oracle_settings())
        extrapolated = oracle.extrapolate([row['_result'] for row in converged],
                                          solve_displacements(params))
        template = rows[0]
        gap_key = 'gap' if template['alpha0_sq'] == 0.0 else 'same_parity_gap'

        def value(name: str) -> float:
            return extrapolated.get(name, math.nan)

        return {
            'N': math.inf,
            'y': y,
            'y_over_ycrit': template['y_over_ycrit'],
            'n_max': math.nan,
            'ed_converged': len(converged) >= 2,
            'beta0_sq': template['beta0_sq'],
            'ed_beta2': value('order_param_beta2'),
            'diff_beta2': abs(value('order_param_beta2') - template['beta0_sq']),
            'alpha0_sq': template['alpha0_sq'],
            'ed_n_photon_per_N': value('n_photon_per_N'),
            'diff_photon': abs(value('n_photon_per_N') - template['alpha0_sq']),
            'omega_minus': template['omega_minus'],
            'ed_gap': value('gap'),
            'ed_same_parity_gap': value('same_parity_gap'),
            'diff_gap': abs(value(gap_key) - template['omega_minus']),
            'n_photon_incoh': template['n_photon_incoh'],
            'ed_incoherent_photon': value('incoherent_photon'),
            'meanfield_energy_per_N': template['meanfield_energy_per_N'],
            'ed_ground_energy_per_N': value('ground_energy_per_N'),
            'flags': [] if len(converged) >= 2 else [PointFlag.UNCONVERGED.value],
        }

    def run_oracle_compare(self) -> List[Dict[str, Any]]:
        """
        Mean-field and ED observables side by side

        Returns:
            Rows per (y, N) in the order of y_points and ascending N, each y
            followed by its 1/N → 0 extrapolation row

        Raises:
            ConfigurationError: no oracle block in the configuration
        """
        if self.config.oracle is None:
            raise ConfigurationError("the oracle command needs an 'oracle' block in the config")

        self.logger.info("=" * 60)
        self.logger.info("Starting oracle comparison")
        self.logger.info("=" * 60)
        start_time = time.time()

        ys = [self._to_recoil_y(v) for v in self.config.oracle.y_points]
        atom_numbers = sorted(set(self.config.oracle.N_list))
        jobs = [(y, N) for y in ys for N in atom_numbers]

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            rows = list(executor.map(self._oracle_row, jobs))

        table: List[Dict[str, Any]] = []
        for index, y in enumerate(ys):
            block = rows[index * len(atom_numbers):(index + 1) * len(atom_numbers)]
            table.extend(block)
            table.append(self._extrapolated_row(y, block))

        for row in table:
            row.pop('_result', None)

        self.logger.info(f"Oracle rows: {len(table)} in {format_duration(time.time() - start_time)}")
        return table

    def write_sweep(self, points: List[SweepPoint], output: str):
        """Write sweep rows to CSV"""
        path = self.store.write_rows(output, SWEEP_COLUMNS, (p.to_dict() for p in points))
        self.logger.info(f"Wrote {len(points)} rows to {path}")
        return path

    def write_oracle(self, rows: List[Dict[str, Any]], output: str):
        """Write oracle comparison rows to CSV"""
        path = self.store.write_rows(output, ORACLE_COLUMNS, rows)
        self.logger.info(f"Wrote {len(rows)} rows to {path}")
        return path
