"""
Exact Diagonalization Oracle

Finite-N ground state of the two-mode spin-boson Hamiltonian

    H = −δ_C a†a + ω_R S_z + i y (a† − a) S_x/√N + u a†a (1/2 + S_z/N)

on the product basis |n⟩ ⊗ |m⟩ with a photon cutoff n_max. The gauge rotation
a → i·a turns the coupling into y (a + a†) S_x/√N and the matrix real
symmetric. The parity (−1)^{n+m} is conserved, so each parity sector is
solved separately.
"""

import math
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np
from scipy import linalg, sparse
from scipy.sparse.linalg import eigsh, ArpackNoConvergence

try:
    from ..data.models import (
        ReducedParams, MeanFieldSolution, SpinPhotonBasis, EDResult, FiniteSizeScan,
    )
    from ..data.errors import ConfigurationError, EigensolverError, ResourceLimitError
    from ..utils import get_logger, linear_fit
    from .meanfield import solve_displacements, meanfield_energy
except ImportError:
    from data.models import (
        ReducedParams, MeanFieldSolution, SpinPhotonBasis, EDResult, FiniteSizeScan,
    )
    from data.errors import ConfigurationError, EigensolverError, ResourceLimitError
    from utils import get_logger, linear_fit
    from physics.meanfield import solve_displacements, meanfield_energy


logger = get_logger("oracle")

DEFAULT_SETTINGS: Dict[str, Any] = {
    'dense_limit': 6000,
    'dimension_cap': 200000,
    'convergence_tolerance': 1e-8,
    'eigsh_maxiter': 100000,
    'n_max_rule': {
        'minimum': 40,
        'photon_factor': 8.0,
        'spread_factor': 10.0,
    },
}

EXTRAPOLATED_FIELDS = (
    'ground_energy_per_N',
    'n_photon_per_N',
    'order_param_beta2',
    'gap',
    'same_parity_gap',
    'incoherent_photon',
)


def default_n_max(N: int, alpha0_sq: float, rule: Optional[Dict[str, float]] = None) -> int:
    """
    Photon cutoff max(minimum, ceil(f·N·α0² + s·√(N·α0² + 1)))

    Args:
        N: Atom number
        alpha0_sq: Mean-field photon amplitude squared per atom
        rule: Overrides of minimum / photon_factor / spread_factor

    Returns:
        Photon cutoff n_max
    """
    settings = dict(DEFAULT_SETTINGS['n_max_rule'])
    settings.update(rule or {})
    photons = N * alpha0_sq
    estimate = settings['photon_factor'] * photons + settings['spread_factor'] * math.sqrt(photons + 1.0)
    return max(int(settings['minimum']), int(math.ceil(estimate)))


def variational_energy(r: ReducedParams, N: int, solution: MeanFieldSolution) -> float:
    """
    Expectation of H in the mean-field product coherent state

    N·E_mf − N ω_R/2; an upper bound for the exact ground energy.
    """
    return N * meanfield_energy(r, solution.alpha0, solution.beta0) - 0.5 * N * r.omega_R


def _spin_x(N: int) -> sparse.csr_matrix:
    # ⟨m+1|S_x|m⟩ = √((N−m)(m+1))/2, products taken in integers
    products = np.array([(N - m) * (m + 1) for m in range(N)], dtype=np.int64)
    off = 0.5 * np.sqrt(products.astype(float))
    return sparse.diags([off, off], [-1, 1], shape=(N + 1, N + 1), format='csr')


def _annihilation(n_max: int) -> sparse.csr_matrix:
    return sparse.diags([np.sqrt(np.arange(1, n_max + 1, dtype=float))], [1],
                        shape=(n_max + 1, n_max + 1), format='csr')


class ExactDiagonalizer:
    """
    Exact diagonalization of the finite-N two-mode model

    Couplings u and y are held fixed while N varies.
    """

    def __init__(self, params: ReducedParams, settings: Optional[Dict[str, Any]] = None):
        """
        Initialize the diagonalizer

        Args:
            params: Reduced parameters (N is taken from the basis)
            settings: Overrides of dense_limit, dimension_cap,
                convergence_tolerance, eigsh_maxiter and n_max_rule
        """
        self.params = params
        self.settings = dict(DEFAULT_SETTINGS)
        self.settings.update(settings or {})

    def _check_dimension(self, basis: SpinPhotonBasis) -> None:
        if basis.dimension > self.settings['dimension_cap']:
            raise ResourceLimitError(
                f"dimension {basis.dimension} exceeds the cap {self.settings['dimension_cap']} "
                f"(N={basis.N}, n_max={basis.n_max})"
            )

    def build_hamiltonian(self, basis: SpinPhotonBasis, gauge_rotated: bool = True) -> sparse.csr_matrix:
        """
        Sparse Hamiltonian matrix in the product basis

        Args:
            basis: Product basis, index n·(N+1) + m
            gauge_rotated: Real symmetric form (a + a†) if True, complex
                Hermitian form i(a† − a) otherwise

        Returns:
            CSR matrix of size basis.dimension

        Raises:
            ResourceLimitError: dimension above the configured cap
        """
        self._check_dimension(basis)
        r = self.params
        N = basis.N

        n = basis.photon_numbers.astype(float)
        m = basis.atom_occupations.astype(float)
        diagonal = -r.delta_C * n + r.omega_R * (m - 0.5 * N) + r.u * n * m / N

        a = _annihilation(basis.n_max)
        if gauge_rotated:
            quadrature = a + a.T
        else:
            quadrature = 1j * (a.T - a)
        coupling = sparse.kron(quadrature, _spin_x(N), format='csr') * (r.y / math.sqrt(N))

        H = sparse.diags(diagonal, 0, format='csr') + coupling
        return H.tocsr()

    def _lowest(self, block: sparse.csr_matrix, count: int) -> Tuple[np.ndarray, np.ndarray]:
        dimension = block.shape[0]
        count = min(count, dimension)
        if dimension <= self.settings['dense_limit'] or count >= dimension - 1:
            values, vectors = linalg.eigh(block.toarray(), subset_by_index=[0, count - 1])
            return values, vectors

        try:
            values, vectors = eigsh(block, k=count, which='SA', tol=0,
                                    maxiter=self.settings['eigsh_maxiter'])
        except ArpackNoConvergence as e:
            raise EigensolverError(
                f"eigsh did not converge for block dimension {dimension}: "
                f"{len(e.eigenvalues)} of {count} eigenpairs found"
            )
        order = np.argsort(values)
        return values[order], vectors[:, order]

    def _sector_spectra(self, H: sparse.csr_matrix, basis: SpinPhotonBasis,
                        count: int) -> Dict[int, Tuple[np.ndarray, np.ndarray, np.ndarray]]:
        spectra = {}
        for parity in (1, -1):
            indices = basis.parity_indices(parity)
            if indices.size == 0:
                continue
            block = H[indices, :][:, indices]
            values, vectors = self._lowest(block, count)
            spectra[parity] = (values, vectors, indices)
        logger.debug(
            f"Solved parity sectors of dimension {basis.dimension} "
            f"(dense limit {self.settings['dense_limit']})"
        )
        return spectra

    def ground_energy(self, H: sparse.csr_matrix, basis: SpinPhotonBasis) -> float:
        """Lowest eigenvalue over both parity sectors"""
        spectra = self._sector_spectra(H, basis, 1)
        return float(min(values[0] for values, _, _ in spectra.values()))

    def ground_state_solve(self, H: sparse.csr_matrix, basis: SpinPhotonBasis,
                           check_convergence: bool = True,
                           gauge_rotated: bool = True) -> EDResult:
        """
        Ground state, gaps and observables

        Args:
            H: Matrix from ``build_hamiltonian``
            basis: Basis of H
            check_convergence: Re-solve with 2·n_max and compare ground energies
            gauge_rotated: Matrix form of H, reused for the re-solve

        Returns:
            EDResult

        Raises:
            EigensolverError: iterative eigensolver failure
            ResourceLimitError: doubled basis above the cap
        """
        spectra = self._sector_spectra(H, basis, 2)
        ground_parity = min(spectra, key=lambda p: spectra[p][0][0])
        values, vectors, indices = spectra[ground_parity]
        ground_energy = float(values[0])

        levels = np.sort(np.concatenate([v for v, _, _ in spectra.values()]))
        gap = float(levels[1] - levels[0]) if levels.size > 1 else math.nan
        same_parity_gap = float(values[1] - values[0]) if values.size > 1 else math.nan

        state = np.zeros(basis.dimension, dtype=vectors.dtype)
        state[indices] = vectors[:, 0]
        probabilities = np.abs(state) ** 2
        probabilities /= probabilities.sum()

        N = basis.N
        mean_photon = float(probabilities @ basis.photon_numbers)
        sz = float(probabilities @ basis.sz_values)
        lowered = sparse.kron(_annihilation(basis.n_max), sparse.identity(N + 1), format='csr') @ state
        parity_expectation = float(abs(np.vdot(state, lowered)))

        converged = True
        if check_convergence:
            doubled = basis.doubled()
            refined = self.ground_energy(self.build_hamiltonian(doubled, gauge_rotated), doubled)
            scale = max(abs(ground_energy), self.params.omega_R)
            converged = abs(refined - ground_energy) < self.settings['convergence_tolerance'] * scale
            if not converged:
                logger.warning(
                    f"Photon cutoff n_max={basis.n_max} not converged for N={N}: "
                    f"ΔE = {refined - ground_energy:.3e}"
                )

        return EDResult(
            N=N,
            n_max=basis.n_max,
            ground_energy=ground_energy,
            gap=gap,
            same_parity_gap=same_parity_gap,
            mean_photon=mean_photon,
            n_photon_per_N=mean_photon / N,
            sz_per_N=sz / N,
            order_param_beta2=min(1.0, max(0.0, sz / N + 0.5)),
            parity_expectation=parity_expectation,
            converged=converged,
        )

    def solve(self, N: int, n_max: Optional[int] = None, gauge_rotated: bool = True) -> EDResult:
        """
        Build and solve at one atom number

        Args:
            N: Atom number
            n_max: Photon cutoff (cutoff rule if None)
            gauge_rotated: Matrix form passed to ``build_hamiltonian``

        Returns:
            EDResult
        """
        if n_max is None:
            solution = solve_displacements(self.params)
            n_max = default_n_max(N, solution.alpha0_sq, self.settings['n_max_rule'])
        basis = SpinPhotonBasis(N=N, n_max=n_max)
        H = self.build_hamiltonian(basis, gauge_rotated)
        return self.ground_state_solve(H, basis, gauge_rotated=gauge_rotated)

    def finite_size_scan(self, N_list: Iterable[int],
                         n_max_rule: Optional[Dict[str, float]] = None) -> FiniteSizeScan:
        """
        ED results over several atom numbers with a 1/N → 0 extrapolation

        Args:
            N_list: Atom numbers
            n_max_rule: Overrides of the cutoff rule

        Returns:
            FiniteSizeScan; unconverged rows are kept but excluded from the fit

        Raises:
            ConfigurationError: empty N list
        """
        N_values = sorted(set(int(N) for N in N_list))
        if not N_values:
            raise ConfigurationError("finite-size scan needs a non-empty N list")

        rule = dict(self.settings['n_max_rule'])
        rule.update(n_max_rule or {})
        solution = solve_displacements(self.params)

        scan = FiniteSizeScan()
        for N in N_values:
            n_max = default_n_max(N, solution.alpha0_sq, rule)
            result = self.solve(N, n_max)
            logger.info(
                f"ED N={N}, n_max={n_max}: E0={result.ground_energy:.10g}, "
                f"gap={result.gap:.6g}, β²={result.order_param_beta2:.6g}"
            )
            scan.rows.append(result)

        scan.extrapolated = self.extrapolate(scan.converged_rows, solution)
        return scan

    def extrapolate(self, rows: List[EDResult], solution: MeanFieldSolution) -> Dict[str, float]:
        """Linear fit in 1/N of the per-atom observables; empty with fewer than two rows"""
        if len(rows) < 2:
            logger.warning("Fewer than two converged rows, no 1/N extrapolation")
            return {}

        inverse = [1.0 / row.N for row in rows]
        series = {
            'ground_energy_per_N': [row.ground_energy / row.N for row in rows],
            'n_photon_per_N': [row.n_photon_per_N for row in rows],
            'order_param_beta2': [row.order_param_beta2 for row in rows],
            'gap': [row.gap for row in rows],
            'same_parity_gap': [row.same_parity_gap for row in rows],
            'incoherent_photon': [row.mean_photon - row.N * solution.alpha0_sq for row in rows],
        }
        extrapolated = {}
        for name in EXTRAPOLATED_FIELDS:
            _, intercept = linear_fit(inverse, series[name])
            extrapolated[name] = intercept
        return extrapolated
