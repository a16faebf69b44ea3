import math

import numpy as np
import pytest

from src.data.models import SpinPhotonBasis
from src.data.errors import ConfigurationError, ResourceLimitError
from src.physics.meanfield import solve_displacements
from src.physics.oracle import ExactDiagonalizer, default_n_max, variational_energy

from conftest import at_ratio


class TestBasis:
    def test_index_layout(self):
        basis = SpinPhotonBasis(N=4, n_max=3)
        assert basis.dimension == 20
        assert basis.index(2, 3) == 13
        assert basis.state(13) == (2, 3)
        assert basis.sz_values[basis.index(0, 0)] == -2.0

    def test_parity_sectors_partition_the_basis(self):
        basis = SpinPhotonBasis(N=5, n_max=6)
        even = basis.parity_indices(1)
        odd = basis.parity_indices(-1)
        assert len(even) + len(odd) == basis.dimension
        assert not set(even) & set(odd)

    def test_invalid_cutoff(self):
        with pytest.raises(ConfigurationError):
            SpinPhotonBasis(N=4, n_max=0)


class TestCutoffRule:
    def test_minimum_applies_without_photons(self):
        assert default_n_max(40, 0.0) == 40

    def test_grows_with_photon_number(self):
        assert default_n_max(1000, 0.1) == math.ceil(8 * 100 + 10 * math.sqrt(101))

    def test_rule_overrides(self):
        assert default_n_max(10, 0.0, {'minimum': 5, 'spread_factor': 2.0}) == 5


class TestHamiltonian:
    def test_hermitian_and_real_in_rotated_gauge(self):
        oracle = ExactDiagonalizer(at_ratio(1.5))
        H = oracle.build_hamiltonian(SpinPhotonBasis(N=6, n_max=10))
        assert H.dtype.kind == 'f'
        assert abs(H - H.T).max() < 1e-12

    def test_parity_conserved(self):
        basis = SpinPhotonBasis(N=6, n_max=10)
        H = ExactDiagonalizer(at_ratio(1.5)).build_hamiltonian(basis).toarray()
        even = basis.parity_indices(1)
        odd = basis.parity_indices(-1)
        assert np.abs(H[np.ix_(even, odd)]).max() == 0.0

    def test_gauges_share_the_spectrum(self):
        oracle = ExactDiagonalizer(at_ratio(1.5))
        basis = SpinPhotonBasis(N=6, n_max=20)
        rotated = np.linalg.eigvalsh(oracle.build_hamiltonian(basis, gauge_rotated=True).toarray())
        original = np.linalg.eigvalsh(oracle.build_hamiltonian(basis, gauge_rotated=False).toarray())
        np.testing.assert_allclose(rotated, original, atol=1e-9)

    @pytest.mark.parametrize("ratio, N", [(0.5, 10), (1.5, 10), (2.0, 20)])
    def test_observables_do_not_depend_on_gauge(self, ratio, N):
        oracle = ExactDiagonalizer(at_ratio(ratio))
        rotated = oracle.solve(N, gauge_rotated=True)
        original = oracle.solve(N, gauge_rotated=False)
        assert original.mean_photon == pytest.approx(rotated.mean_photon, abs=1e-10)
        assert original.sz_per_N == pytest.approx(rotated.sz_per_N, abs=1e-10)
        assert original.ground_energy == pytest.approx(rotated.ground_energy, abs=1e-9)

    def test_dimension_cap(self):
        oracle = ExactDiagonalizer(at_ratio(0.5), {'dimension_cap': 100})
        with pytest.raises(ResourceLimitError):
            oracle.build_hamiltonian(SpinPhotonBasis(N=10, n_max=10))


class TestGroundState:
    def test_decoupled_gap_is_recoil(self, fig_params):
        result = ExactDiagonalizer(fig_params).solve(10)
        assert result.gap == pytest.approx(1.0, abs=1e-8)
        assert result.ground_energy == pytest.approx(-5.0, abs=1e-10)
        assert result.order_param_beta2 == pytest.approx(0.0, abs=1e-12)
        assert result.converged

    def test_dense_and_iterative_solvers_agree(self):
        params = at_ratio(1.5)
        dense = ExactDiagonalizer(params).solve(8, n_max=40)
        sparse = ExactDiagonalizer(params, {'dense_limit': 10}).solve(8, n_max=40)
        assert sparse.ground_energy == pytest.approx(dense.ground_energy, abs=1e-8)
        assert sparse.same_parity_gap == pytest.approx(dense.same_parity_gap, abs=1e-6)

    def test_mean_field_state_is_an_upper_bound(self):
        params = at_ratio(2.0)
        solution = solve_displacements(params)
        result = ExactDiagonalizer(params).solve(20)
        assert result.ground_energy <= variational_energy(params, 20, solution) + 1e-9

    def test_symmetry_broken_doublet_above_threshold(self):
        result = ExactDiagonalizer(at_ratio(2.0)).solve(20)
        assert result.gap < 1e-3 * result.same_parity_gap

    def test_order_parameter_approaches_mean_field(self):
        params = at_ratio(2.0)
        beta_sq = solve_displacements(params).beta0_sq
        oracle = ExactDiagonalizer(params)
        small = abs(oracle.solve(10).order_param_beta2 - beta_sq)
        large = abs(oracle.solve(40).order_param_beta2 - beta_sq)
        assert large < small


class TestFiniteSizeScan:
    def test_rows_and_extrapolation(self):
        scan = ExactDiagonalizer(at_ratio(2.0)).finite_size_scan([20, 10])
        assert [row.N for row in scan.rows] == [10, 20]
        assert set(scan.extrapolated) >= {'order_param_beta2', 'ground_energy_per_N', 'gap'}

    def test_single_row_is_not_extrapolated(self, fig_params):
        scan = ExactDiagonalizer(fig_params).finite_size_scan([4])
        assert scan.extrapolated == {}

    def test_empty_list_rejected(self, fig_params):
        with pytest.raises(ConfigurationError):
            ExactDiagonalizer(fig_params).finite_size_scan([])
