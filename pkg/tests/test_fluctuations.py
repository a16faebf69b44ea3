import math

import numpy as np
import pytest

from src.data.models import MeanFieldSolution, ModeFamily, ModeKind, QuadraticCoeffs
from src.data.errors import ConfigurationError, DegenerateModeError, InstabilityError
from src.physics.meanfield import solve_displacements, symmetry_partner
from src.physics.fluctuations import (
    BOSONIC_METRIC,
    adjoint_partner,
    approximate_soft_frequency,
    critical_margin,
    drift_matrix,
    eigenfrequencies,
    gap_exponent,
    ground_state_covariance,
    ground_state_populations,
    is_critical,
    mode_decomposition,
    quadratic_coefficients,
    williamson_populations,
)

from conftest import at_ratio, coefficients_at


def expected_drift_eigenvalues(spectrum):
    return np.sort([-spectrum.omega_plus, -spectrum.omega_minus,
                    spectrum.omega_minus, spectrum.omega_plus])


class TestQuadraticCoefficients:
    def test_normal_phase(self, fig_params):
        q = coefficients_at(fig_params.with_y(6.0))
        assert q == QuadraticCoeffs(M0=100.0, Mx=1.0, My=1.0, Mc=6.0)

    def test_critical_margin_vanishes_at_threshold(self, fig_params):
        q = coefficients_at(fig_params.with_y(10.0))
        assert critical_margin(q) == pytest.approx(0.0, abs=1e-10)

    def test_superradiant_margin_positive(self):
        for ratio in (1.1, 1.5, 2.0):
            assert critical_margin(coefficients_at(at_ratio(ratio))) > 0

    @pytest.mark.parametrize("ratio", [0.0, 0.3, 0.9, 0.99])
    def test_no_single_mode_squeezing_below_threshold(self, ratio):
        assert coefficients_at(at_ratio(ratio)).squeezing_coefficient == 0.0

    def test_single_mode_squeezing_above_threshold(self):
        q = coefficients_at(at_ratio(1.5))
        assert q.squeezing_coefficient == (q.Mx - q.My) / 4.0
        assert q.squeezing_coefficient != 0.0

    @pytest.mark.parametrize("ratio", [1.2, 1.5, 2.0])
    def test_symmetry_partner_gives_same_spectrum(self, ratio):
        params = at_ratio(ratio)
        solution = solve_displacements(params)
        spectrum = eigenfrequencies(quadratic_coefficients(params, solution))
        mirrored = eigenfrequencies(quadratic_coefficients(params, symmetry_partner(solution)))
        assert mirrored.omega_plus == pytest.approx(spectrum.omega_plus, rel=1e-12)
        assert mirrored.omega_minus == pytest.approx(spectrum.omega_minus, rel=1e-12)


class TestEigenfrequencies:
    def test_decoupled(self, fig_params):
        spectrum = eigenfrequencies(coefficients_at(fig_params))
        assert spectrum.stable
        assert spectrum.omega_plus == 100.0
        assert spectrum.omega_minus == 1.0

    def test_soft_mode_below_threshold(self, fig_params):
        spectrum = eigenfrequencies(coefficients_at(fig_params.with_y(6.0)))
        assert spectrum.omega_minus == pytest.approx(0.8, abs=1e-3)

    def test_soft_mode_vanishes_at_threshold(self, fig_params):
        spectrum = eigenfrequencies(coefficients_at(fig_params.with_y(10.0)))
        assert spectrum.stable
        assert spectrum.omega_minus == 0.0
        assert is_critical(spectrum)

    @pytest.mark.parametrize("ratio", [1.0 - 1e-14, 1.0 + 1e-14])
    def test_rounding_neighbourhood_counts_as_critical(self, ratio):
        q = coefficients_at(at_ratio(ratio))
        spectrum = eigenfrequencies(q)
        assert spectrum.stable
        assert spectrum.omega_minus < 1e-6
        assert is_critical(spectrum)
        with pytest.raises(DegenerateModeError):
            mode_decomposition(q)

    def test_small_soft_frequency_is_not_critical(self):
        spectrum = eigenfrequencies(coefficients_at(at_ratio(1.0 - 1e-6)))
        assert spectrum.omega_minus > 1e-4
        assert not is_critical(spectrum)

    def test_expansion_around_wrong_solution_is_unstable(self):
        params = at_ratio(1.5)
        spectrum = eigenfrequencies(quadratic_coefficients(params, MeanFieldSolution.normal()))
        assert not spectrum.stable
        assert math.isnan(spectrum.omega_minus)

    @pytest.mark.parametrize("ratio", [0.2, 0.5, 0.9, 1.2, 1.5, 2.0])
    def test_matches_drift_eigenvalues(self, ratio):
        q = coefficients_at(at_ratio(ratio))
        spectrum = eigenfrequencies(q)
        eigenvalues = np.linalg.eigvals(drift_matrix(q).drift)
        np.testing.assert_allclose(np.sort(eigenvalues.imag), expected_drift_eigenvalues(spectrum),
                                   rtol=1e-8)
        assert np.max(np.abs(eigenvalues.real)) < 1e-8 * spectrum.omega_plus

    def test_approximate_soft_frequency(self):
        for ratio in np.linspace(0.0, 0.95, 12):
            params = at_ratio(ratio)
            exact = eigenfrequencies(coefficients_at(params)).omega_minus
            assert approximate_soft_frequency(params) == pytest.approx(exact, rel=1e-2)

    def test_approximate_soft_frequency_above_threshold(self):
        assert math.isnan(approximate_soft_frequency(at_ratio(1.5)))


class TestGapExponent:
    def test_below_threshold(self, fig_params):
        assert gap_exponent(fig_params, "below") == pytest.approx(0.5, abs=0.02)

    def test_above_threshold(self, fig_params):
        assert gap_exponent(fig_params, "above") == pytest.approx(0.5, abs=0.02)

    def test_window_outside_critical_region(self, fig_params):
        with pytest.raises(ConfigurationError):
            gap_exponent(fig_params, "below", window=(1e-3, 0.1))

    def test_unknown_side(self, fig_params):
        with pytest.raises(ConfigurationError):
            gap_exponent(fig_params, "sideways")


class TestDriftMatrix:
    def test_generated_by_hermitian_hamiltonian(self):
        drift = drift_matrix(coefficients_at(at_ratio(1.4))).drift
        generator = 1j * BOSONIC_METRIC @ drift
        np.testing.assert_allclose(generator, generator.conj().T, atol=1e-12)

    def test_adjoint_rows_are_swap_conjugates(self):
        drift = drift_matrix(coefficients_at(at_ratio(0.7))).drift
        swap = np.eye(4)[[1, 0, 3, 2]]
        np.testing.assert_allclose(swap @ drift.conj() @ swap, drift, atol=1e-12)


class TestModeDecomposition:
    @pytest.mark.parametrize("ratio", [0.6, 1.5])
    def test_biorthogonal_and_complete(self, ratio):
        modes = mode_decomposition(coefficients_at(at_ratio(ratio)))
        assert modes.biorthogonality_residual() < 1e-10
        assert modes.completeness_residual() < 1e-10

    @pytest.mark.parametrize("ratio", [0.6, 1.5])
    def test_bosonic_norm(self, ratio):
        modes = mode_decomposition(coefficients_at(at_ratio(ratio)))
        for mode in modes.modes:
            norm = np.real(np.vdot(mode.left, BOSONIC_METRIC @ mode.left))
            expected = 1.0 if mode.kind is ModeKind.ANNIHILATION else -1.0
            assert norm == pytest.approx(expected, abs=1e-10)

    def test_eigenvector_equations(self):
        modes = mode_decomposition(coefficients_at(at_ratio(0.6)))
        for mode in modes.modes:
            eigenvalue = -1j * mode.frequency
            np.testing.assert_allclose(modes.drift @ mode.right, eigenvalue * mode.right, atol=1e-9)
            np.testing.assert_allclose(modes.drift.conj().T @ mode.left,
                                       np.conj(eigenvalue) * mode.left, atol=1e-9)

    def test_ordering_and_partners(self):
        modes = mode_decomposition(coefficients_at(at_ratio(0.6)))
        kinds = [(m.family, m.kind) for m in modes.modes]
        assert kinds == [
            (ModeFamily.PLUS, ModeKind.ANNIHILATION),
            (ModeFamily.PLUS, ModeKind.CREATION),
            (ModeFamily.MINUS, ModeKind.ANNIHILATION),
            (ModeFamily.MINUS, ModeKind.CREATION),
        ]
        plus = modes.mode(ModeFamily.PLUS)
        partner = modes.mode(ModeFamily.PLUS, ModeKind.CREATION)
        assert partner.frequency == -plus.frequency
        np.testing.assert_array_equal(partner.right, adjoint_partner(plus.right))

    def test_phase_convention(self):
        modes = mode_decomposition(coefficients_at(at_ratio(0.6)))
        for mode in modes.modes:
            if mode.kind is ModeKind.ANNIHILATION:
                pivot = mode.right[np.argmax(np.abs(mode.right))]
                assert abs(pivot.imag) < 1e-12
                assert pivot.real > 0

    def test_critical_point_rejected(self, fig_params):
        with pytest.raises(DegenerateModeError):
            mode_decomposition(coefficients_at(fig_params.with_y(10.0)))

    def test_unstable_spectrum_rejected(self):
        q = quadratic_coefficients(at_ratio(1.5), MeanFieldSolution.normal())
        with pytest.raises(InstabilityError):
            mode_decomposition(q)


class TestGroundStatePopulations:
    def test_decoupled_vacuum(self, fig_params):
        stats = ground_state_populations(coefficients_at(fig_params))
        assert stats.n_photon == pytest.approx(0.0, abs=1e-14)
        assert stats.n_atom == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("ratio", [0.3, 0.6, 0.9, 1.5, 2.0])
    def test_matches_williamson_form(self, ratio):
        q = coefficients_at(at_ratio(ratio))
        modes = ground_state_populations(q)
        symplectic = williamson_populations(q)
        assert modes.n_photon == pytest.approx(symplectic.n_photon, rel=1e-8)
        assert modes.n_atom == pytest.approx(symplectic.n_atom, rel=1e-8)

    def test_grow_towards_threshold(self):
        trend = [ground_state_populations(coefficients_at(at_ratio(r))) for r in (0.9, 0.99, 0.999)]
        for before, after in zip(trend, trend[1:]):
            assert before.n_photon < after.n_photon
            assert before.n_atom < after.n_atom

    def test_divergent_at_threshold(self, fig_params):
        stats = ground_state_populations(coefficients_at(fig_params.with_y(10.0)))
        assert stats.divergent
        assert math.isinf(stats.n_photon)

    def test_unstable_spectrum_rejected(self):
        q = quadratic_coefficients(at_ratio(1.5), MeanFieldSolution.normal())
        with pytest.raises(InstabilityError):
            ground_state_populations(q)

    def test_vacuum_covariance_at_zero_coupling(self, fig_params):
        covariance = ground_state_covariance(coefficients_at(fig_params))
        np.testing.assert_allclose(covariance, 0.5 * np.eye(4), atol=1e-12)
