import json
import math

import pytest

from src.data.csv_store import CSVStore, parse_cell
from src.main import main, build_parser


def write_config(path, **overrides):
    data = {
        'omega_R': 1.0,
        'delta_C': -100.0,
        'u': -0.1,
        'kappa': 1.0,
        'y_grid': {'min': 0.0, 'max': 2.0, 'points': 21},
    }
    data.update(overrides)
    path.write_text(json.dumps(data), encoding='utf-8')
    return str(path)


class TestParser:
    def test_commands(self):
        parser = build_parser()
        args = parser.parse_args(['fig2', '--kappa', '0.5', '--dt', '0.05', '--workers', '2'])
        assert args.command == 'fig2'
        assert args.kappa == 0.5
        assert args.dt == 0.05
        assert args.workers == 2

    def test_no_command_shows_help(self, run_dir, capsys):
        assert main([]) == 1
        assert "usage" in capsys.readouterr().out.lower()

    def test_unknown_option_is_usage_error(self, run_dir, capsys):
        assert main(['sweep', '--bogus']) == 1
        assert "Error" in capsys.readouterr().err

    @pytest.mark.parametrize("workers", ["0", "-1", "two"])
    def test_invalid_worker_count_is_usage_error(self, run_dir, capsys, workers):
        assert main(['fig1', f'--workers={workers}']) == 1
        assert "--workers" in capsys.readouterr().err


class TestSweepCommand:
    def test_writes_table(self, run_dir):
        config = write_config(run_dir / "sweep.json")
        assert main(['sweep', '-c', config, '--output', 'out/sweep.csv']) == 0
        lines = (run_dir / "out" / "sweep.csv").read_text(encoding='utf-8').splitlines()
        assert lines[0].startswith("y,y_over_ycrit,alpha0")
        assert len(lines) == 22

    def test_default_output_location(self, run_dir):
        config = write_config(run_dir / "sweep.json")
        assert main(['sweep', '-c', config]) == 0
        assert (run_dir / "output" / "sweep.csv").exists()

    def test_output_from_config(self, run_dir):
        config = write_config(run_dir / "sweep.json", output="from_config.csv")
        assert main(['sweep', '-c', config]) == 0
        assert (run_dir / "from_config.csv").exists()

    def test_byte_identical_across_workers(self, run_dir):
        config = write_config(run_dir / "sweep.json")
        assert main(['sweep', '-c', config, '--output', 'one.csv', '--workers', '1']) == 0
        assert main(['sweep', '-c', config, '--output', 'two.csv', '--workers', '4']) == 0
        assert (run_dir / "one.csv").read_bytes() == (run_dir / "two.csv").read_bytes()

    def test_missing_config(self, run_dir, capsys):
        assert main(['sweep']) == 1
        assert "-c/--config" in capsys.readouterr().err

    def test_malformed_json(self, run_dir):
        path = run_dir / "broken.json"
        path.write_text("{not json", encoding='utf-8')
        assert main(['sweep', '-c', str(path)]) == 1

    def test_regime_violation(self, run_dir, capsys):
        config = write_config(run_dir / "sweep.json", delta_C=5.0)
        assert main(['sweep', '-c', config]) == 1
        assert "δ_C must be negative" in capsys.readouterr().err

    def test_invalid_override(self, run_dir):
        config = write_config(run_dir / "sweep.json")
        assert main(['sweep', '-c', config, '--kappa', '-1']) == 1

    def test_unwritable_output(self, run_dir):
        (run_dir / "blocker").write_text("file", encoding='utf-8')
        config = write_config(run_dir / "sweep.json")
        assert main(['sweep', '-c', config, '--output', 'blocker/sweep.csv']) == 1


class TestPresets:
    def test_fig1_is_deterministic(self, run_dir):
        assert main(['fig1', '--output', 'a.csv']) == 0
        assert main(['fig1', '--output', 'b.csv', '--workers', '3']) == 0
        first = (run_dir / "a.csv").read_bytes()
        assert first == (run_dir / "b.csv").read_bytes()
        assert len(first.decode('utf-8').splitlines()) == 402

        rows = CSVStore().read_rows(str(run_dir / "a.csv"))
        assert parse_cell(rows[200]['y_over_ycrit']) == 1.0
        assert rows[200]['flags'] == "critical;divergent_populations"
        assert math.isnan(parse_cell(rows[200]['rate_modes']))
        assert parse_cell(rows[400]['beta0_sq']) == pytest.approx(0.37516, abs=1e-5)
        assert parse_cell(rows[100]['alpha0_sq']) == 0.0

    def test_fig2_kappa_override(self, run_dir):
        assert main(['fig2', '--output', 'k1.csv']) == 0
        assert main(['fig2', '--output', 'k2.csv', '--kappa', '2']) == 0
        assert (run_dir / "k1.csv").read_bytes() != (run_dir / "k2.csv").read_bytes()


class TestOracleCommand:
    def test_small_comparison(self, run_dir):
        config = write_config(run_dir / "oracle.json", oracle={'N_list': [4, 6], 'y_points': [0.0, 2.0]})
        assert main(['oracle', '-c', config, '--output', 'oracle.csv']) == 0
        lines = (run_dir / "oracle.csv").read_text(encoding='utf-8').splitlines()
        assert lines[0].startswith("N,y,y_over_ycrit,n_max")
        assert len(lines) == 1 + 2 * 3
        assert lines[3].startswith("inf,0,0,nan,true")

    def test_needs_oracle_block(self, run_dir):
        config = write_config(run_dir / "oracle.json")
        assert main(['oracle', '-c', config]) == 1


class TestValidateCommand:
    def test_exit_code_follows_results(self, run_dir, monkeypatch, capsys):
        import src.main as cli
        from src.data.models import CheckResult

        monkeypatch.setattr(cli, 'run_validation',
                            lambda settings, numerics: [CheckResult('ok', True, 'fine')])
        assert main(['validate']) == 0
        assert "PASS  ok: fine" in capsys.readouterr().out

        monkeypatch.setattr(cli, 'run_validation',
                            lambda settings, numerics: [CheckResult('bad', False, 'off')])
        assert main(['validate']) == 2
        assert "FAIL  bad: off" in capsys.readouterr().out
