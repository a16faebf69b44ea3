import math

import pytest

from src.data.models import PointFlag, SWEEP_COLUMNS
from src.data.errors import ConfigurationError
from src.data.csv_store import format_cell
from src.sweep.manager import SweepManager
from src.sweep.schemas import parse_config_data


def sweep_config(**overrides):
    data = {
        'delta_C': -100.0,
        'u': -0.1,
        'kappa': 1.0,
        'y_grid': {'min': 0.0, 'max': 2.0, 'points': 9},
    }
    data.update(overrides)
    return parse_config_data(data)


def rendered(point):
    return [format_cell(value) for value in point.to_dict().values()]


class TestGrid:
    def test_relative_scale(self):
        manager = SweepManager(sweep_config())
        assert manager.y_crit == 10.0
        assert manager.grid()[-1] == pytest.approx(20.0)

    def test_absolute_scale_in_document_units(self):
        config = sweep_config(omega_R=2.0, delta_C=-200.0, u=-0.2,
                              y_grid={'min': 0.0, 'max': 40.0, 'points': 3, 'scale': 'absolute'})
        manager = SweepManager(config)
        assert manager.params.delta_C == pytest.approx(-100.0)
        assert list(manager.grid()) == pytest.approx([0.0, 10.0, 20.0])

    def test_default_coarse_grain_step(self):
        assert SweepManager(sweep_config()).delta_t == pytest.approx(0.1)

    def test_coarse_grain_step_converted(self):
        config = sweep_config(omega_R=2.0, delta_C=-200.0, u=-0.2, coarse_grain_dt=0.05)
        assert SweepManager(config).delta_t == pytest.approx(0.1)


class TestEvaluatePoint:
    def test_normal_phase_point(self):
        point = SweepManager(sweep_config()).evaluate_point(6.0)
        assert point.flags == []
        assert point.beta0_sq == 0.0
        assert point.omega_minus == pytest.approx(0.8, abs=1e-3)
        assert point.rate_adiabatic == pytest.approx(36.0 / 10001.0)
        assert point.rate_populations == pytest.approx(point.rate_adiabatic, rel=0.05)
        assert point.n_photon_incoh > 0

    def test_critical_point_flagged(self):
        point = SweepManager(sweep_config()).evaluate_point(10.0)
        assert PointFlag.CRITICAL.value in point.flags
        assert PointFlag.DIVERGENT.value in point.flags
        assert math.isnan(point.n_photon_incoh)
        assert math.isnan(point.rate_modes)
        assert math.isfinite(point.rate_populations)

    def test_superradiant_point(self):
        point = SweepManager(sweep_config()).evaluate_point(20.0)
        assert point.flags == []
        assert point.beta0_sq == pytest.approx(0.37516, abs=1e-5)
        assert point.alpha0 < 0


class TestRunSweep:
    def test_order_independent_of_workers(self):
        serial = SweepManager(sweep_config(), max_workers=1).run_sweep()
        parallel = SweepManager(sweep_config(), max_workers=4).run_sweep()
        assert [p.y for p in serial] == [p.y for p in parallel]
        assert [rendered(p) for p in serial] == [rendered(p) for p in parallel]

    def test_written_table(self, tmp_path):
        manager = SweepManager(sweep_config())
        path = manager.write_sweep(manager.run_sweep(), str(tmp_path / "sweep.csv"))
        lines = path.read_text(encoding='utf-8').splitlines()
        assert lines[0] == ",".join(SWEEP_COLUMNS)
        assert len(lines) == 10
        assert lines[5].endswith("critical;divergent_populations")


class TestOracleCompare:
    def test_requires_oracle_block(self):
        with pytest.raises(ConfigurationError, match="oracle"):
            SweepManager(sweep_config()).run_oracle_compare()

    def test_rows_and_extrapolation(self):
        config = sweep_config(oracle={'N_list': [8, 4], 'y_points': [0.0]})
        rows = SweepManager(config).run_oracle_compare()
        assert [row['N'] for row in rows] == [4, 8, math.inf]
        decoupled = rows[0]
        assert decoupled['ed_gap'] == pytest.approx(1.0, abs=1e-8)
        assert decoupled['diff_gap'] == pytest.approx(0.0, abs=1e-8)
        assert decoupled['ed_converged'] is True
        assert rows[-1]['ed_converged'] is True
