"""Shared fixtures for the test suite"""

import os
import sys

import pytest

# Add the project root to the path so ``src`` is importable
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.data.models import ReducedParams
from src.physics.meanfield import solve_displacements
from src.physics.fluctuations import quadratic_coefficients


FIG_PARAMS = ReducedParams(omega_R=1.0, delta_C=-100.0, u=-0.1, kappa=1.0)


def at_ratio(ratio: float, base: ReducedParams = FIG_PARAMS) -> ReducedParams:
    """Parameters at y = ratio · y_crit"""
    y_crit = (-base.delta_C * base.omega_R) ** 0.5
    return base.with_y(ratio * y_crit)


def coefficients_at(params: ReducedParams):
    return quadratic_coefficients(params, solve_displacements(params))


@pytest.fixture
def fig_params() -> ReducedParams:
    """δ_C = −100 ω_R, u = −0.1 ω_R, κ = ω_R"""
    return FIG_PARAMS


@pytest.fixture
def run_dir(tmp_path, monkeypatch):
    """Working directory for CLI runs, so logs/ and output/ land in tmp_path"""
    monkeypatch.chdir(tmp_path)
    return tmp_path
