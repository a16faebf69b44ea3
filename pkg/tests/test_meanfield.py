import math

import numpy as np
import pytest

from src.data.models import MeanFieldSolution, Phase, ReducedParams
from src.data.errors import SingularInputError
from src.physics.meanfield import (
    critical_coupling,
    meanfield_energy,
    meanfield_residuals,
    quartic_residual,
    solve_displacements,
    symmetry_partner,
)

from conftest import at_ratio


class TestCriticalCoupling:
    def test_standard_value(self, fig_params):
        assert critical_coupling(fig_params) == 10.0

    def test_scales_with_recoil(self):
        assert critical_coupling(ReducedParams(omega_R=4.0, delta_C=-25.0)) == pytest.approx(10.0)


class TestSolveDisplacements:
    def test_normal_below_threshold(self, fig_params):
        solution = solve_displacements(fig_params.with_y(6.0))
        assert solution.phase is Phase.NORMAL
        assert solution.alpha0 == 0.0
        assert solution.beta0 == 0.0

    def test_normal_at_threshold(self, fig_params):
        solution = solve_displacements(fig_params.with_y(10.0))
        assert solution.phase is Phase.NORMAL
        assert solution.beta0_sq == 0.0

    def test_u0_closed_form(self):
        params = ReducedParams(omega_R=1.0, delta_C=-100.0, u=0.0, y=10.0 * math.sqrt(2.0))
        solution = solve_displacements(params)
        assert solution.phase is Phase.SUPERRADIANT
        assert solution.beta0_sq == pytest.approx(0.25, abs=1e-12)
        expected_alpha = params.y * 0.5 * math.sqrt(0.75) / params.delta_C
        assert solution.alpha0 == pytest.approx(expected_alpha, rel=1e-12)

    def test_u0_closed_form_over_grid(self):
        base = ReducedParams(omega_R=1.0, delta_C=-100.0, u=0.0)
        for ratio in np.linspace(1.01, 3.0, 20):
            params = at_ratio(ratio, base)
            expected = (params.y ** 2 - 100.0) / (2.0 * params.y ** 2)
            assert solve_displacements(params).beta0_sq == pytest.approx(expected, abs=1e-12)

    def test_standard_superradiant_point(self, fig_params):
        solution = solve_displacements(fig_params.with_y(20.0))
        assert solution.beta0_sq == pytest.approx(0.37516, abs=1e-5)
        assert solution.alpha0 == pytest.approx(-0.09687, abs=1e-5)
        assert solution.beta0 > 0

    def test_residuals_vanish(self, fig_params):
        for ratio in (1.01, 1.3, 2.0):
            params = at_ratio(ratio)
            solution = solve_displacements(params)
            res_a, res_b = meanfield_residuals(params, solution)
            assert abs(res_a) < 1e-10 * abs(params.delta_C)
            assert abs(res_b) < 1e-10 * abs(params.delta_C)
            assert quartic_residual(params, solution.beta0_sq) == pytest.approx(0.0, abs=1e-12)

    def test_order_parameter_grows_with_pump(self):
        values = [solve_displacements(at_ratio(r)).beta0_sq for r in np.linspace(1.05, 2.0, 10)]
        assert all(a < b for a, b in zip(values, values[1:]))
        assert all(0.0 < v < 0.5 for v in values)


class TestMeanFieldEnergy:
    def test_solution_is_stationary(self):
        params = at_ratio(1.7)
        solution = solve_displacements(params)
        h = 1e-6

        def energy(a, b):
            return meanfield_energy(params, a, b)

        grad_alpha = (energy(solution.alpha0 + h, solution.beta0)
                      - energy(solution.alpha0 - h, solution.beta0)) / (2 * h)
        grad_beta = (energy(solution.alpha0, solution.beta0 + h)
                     - energy(solution.alpha0, solution.beta0 - h)) / (2 * h)
        assert grad_alpha == pytest.approx(0.0, abs=1e-6)
        assert grad_beta == pytest.approx(0.0, abs=1e-6)

    def test_superradiant_state_lies_below_normal(self):
        params = at_ratio(1.5)
        solution = solve_displacements(params)
        assert meanfield_energy(params, solution.alpha0, solution.beta0) < 0.0

    def test_unphysical_amplitude_rejected(self, fig_params):
        with pytest.raises(SingularInputError):
            meanfield_energy(fig_params, 0.1, 1.5)


class TestSymmetryPartner:
    def test_partner_solves_the_same_conditions(self):
        params = at_ratio(1.5)
        partner = symmetry_partner(solve_displacements(params))
        res_a, res_b = meanfield_residuals(params, partner)
        assert abs(res_a) < 1e-8
        assert abs(res_b) < 1e-8

    def test_partner_is_degenerate(self):
        params = at_ratio(1.5)
        solution = solve_displacements(params)
        partner = symmetry_partner(solution)
        assert partner.alpha0 == -solution.alpha0
        assert meanfield_energy(params, partner.alpha0, partner.beta0) == pytest.approx(
            meanfield_energy(params, solution.alpha0, solution.beta0), rel=1e-12
        )

    def test_normal_solution_unchanged(self):
        normal = MeanFieldSolution.normal()
        assert symmetry_partner(normal) is normal


class TestSingularInputs:
    def test_full_inversion_is_singular(self, fig_params):
        solution = MeanFieldSolution(alpha0=0.1, beta0=1.0, phase=Phase.SUPERRADIANT)
        with pytest.raises(SingularInputError):
            meanfield_residuals(fig_params, solution)
