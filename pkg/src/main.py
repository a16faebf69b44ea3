"""
Dicke Toolkit - Main Entry Point

Command-line interface for sweeps, figure presets, oracle comparisons and
the invariant suite.
"""

import sys
import argparse
from pathlib import Path
from typing import List, Optional

try:
    from .sweep import SweepManager, SweepConfig, parse_config, parse_config_data, run_validation
    from .utils import setup_logger, get_config
    from .data.errors import ConfigurationError, OutputError, NumericalError
except ImportError:
    # Add src directory to path
    src_dir = Path(__file__).parent
    sys.path.insert(0, str(src_dir))
    from sweep import SweepManager, SweepConfig, parse_config, parse_config_data, run_validation
    from utils import setup_logger, get_config
    from data.errors import ConfigurationError, OutputError, NumericalError


EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_NUMERICAL = 2


class UsageParser(argparse.ArgumentParser):
    """Argument parser whose usage errors surface as ConfigurationError"""

    def error(self, message):
        raise ConfigurationError(f"{self.prog}: {message}")


def worker_count(text: str) -> int:
    """Positive integer for --workers"""
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"--workers needs an integer, got {text!r}")
    if value < 1:
        raise argparse.ArgumentTypeError(f"--workers must be at least 1, got {value}")
    return value


def setup_application():
    """Initialize application (logging, settings)"""
    config = get_config()
    settings = config.load_settings()

    log_config = settings.get('logging', {})
    logger = setup_logger(
        name="dicke",
        log_file=log_config.get('file_path', 'logs/dicke.log'),
        level=log_config.get('level', 'INFO'),
        max_size_mb=log_config.get('max_size_mb', 10),
        backup_count=log_config.get('backup_count', 5),
        colored_console=log_config.get('colored_console', True)
    )

    return logger, config


def load_sweep_config(path: Optional[str]) -> SweepConfig:
    """Read and validate a JSON sweep document"""
    if not path:
        raise ConfigurationError("this command needs -c/--config PATH")
    try:
        text = Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ConfigurationError(f"Cannot read config {path}: {e}")
    return parse_config(text)


def _output_path(args, cfg: SweepConfig, settings: dict) -> str:
    if args.output:
        return args.output
    if cfg.output:
        return cfg.output
    directory = settings.get('output', {}).get('directory', 'output')
    return str(Path(directory) / f"{args.command}.csv")


def _run_sweep(args, cfg: SweepConfig) -> int:
    logger, config = setup_application()
    settings = config.load_settings()

    cfg = cfg.with_overrides(kappa=args.kappa, coarse_grain_dt=args.dt)
    manager = SweepManager(cfg, settings, max_workers=args.workers)
    points = manager.run_sweep()
    manager.write_sweep(points, _output_path(args, cfg, settings))
    return EXIT_OK


def cmd_sweep(args):
    """Run a sweep from a JSON config"""
    return _run_sweep(args, load_sweep_config(args.config))


def cmd_preset(args):
    """Run the fig1 / fig2 preset"""
    preset = get_config().get_preset(args.command)
    return _run_sweep(args, parse_config_data(preset))


def cmd_oracle(args):
    """Compare mean-field and exact-diagonalization observables"""
    logger, config = setup_application()
    settings = config.load_settings()

    cfg = load_sweep_config(args.config).with_overrides(kappa=args.kappa, coarse_grain_dt=args.dt)
    manager = SweepManager(cfg, settings, max_workers=args.workers)
    rows = manager.run_oracle_compare()
    manager.write_oracle(rows, _output_path(args, cfg, settings))
    return EXIT_OK


def cmd_validate(args):
    """Run the invariant suite"""
    logger, config = setup_application()
    settings = config.load_settings()

    results = run_validation(settings.get('validate', {}), settings.get('numerics', {}))

    print("\n" + "=" * 60)
    print("Invariant Suite")
    print("=" * 60)
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        print(f"{status}  {result.name}: {result.detail}")

    failed = sum(1 for r in results if not r.passed)
    print("-" * 60)
    print(f"Checks: {len(results)}, failed: {failed}")
    print("=" * 60 + "\n")

    return EXIT_OK if failed == 0 else EXIT_NUMERICAL


def _add_common_options(parser: argparse.ArgumentParser, config_required: bool) -> None:
    parser.add_argument(
        '-c', '--config',
        metavar='PATH',
        help='JSON sweep config' + (' (required)' if config_required else '')
    )
    parser.add_argument('--output', metavar='PATH', help='CSV output path')
    parser.add_argument('--kappa', type=float, metavar='X', help='Override photon loss κ')
    parser.add_argument('--dt', type=float, metavar='X', help='Override coarse-graining step δt')
    parser.add_argument('--workers', type=worker_count, metavar='N', help='Worker threads (default: sweep.max_workers)')


def build_parser() -> argparse.ArgumentParser:
    """Command-line parser"""
    parser = UsageParser(
        prog="dicke",
        description="Cavity-BEC Dicke model - phase diagram, fluctuations and diffusion rates",
        formatter_class=argparse.RawDescriptionHelpFormatter,
        epilog="""
Examples:
  %(prog)s sweep -c sweep.json             Sweep the pump coupling of a JSON config
  %(prog)s fig1 --output fig1.csv          Order parameters and populations preset
  %(prog)s fig2 --kappa 1 --dt 0.1         Diffusion-rate preset
  %(prog)s oracle -c oracle.json           Exact diagonalization vs mean field
  %(prog)s validate                        Run the invariant suite
        """
    )

    subparsers = parser.add_subparsers(dest='command', help='Commands', parser_class=UsageParser)

    parser_sweep = subparsers.add_parser('sweep', help='Sweep from a JSON config')
    _add_common_options(parser_sweep, config_required=True)
    parser_sweep.set_defaults(func=cmd_sweep)

    parser_fig1 = subparsers.add_parser('fig1', help='Order parameters and incoherent populations preset')
    _add_common_options(parser_fig1, config_required=False)
    parser_fig1.set_defaults(func=cmd_preset)

    parser_fig2 = subparsers.add_parser('fig2', help='Diffusion-rate preset')
    _add_common_options(parser_fig2, config_required=False)
    parser_fig2.set_defaults(func=cmd_preset)

    parser_oracle = subparsers.add_parser('oracle', help='Exact-diagonalization comparison')
    _add_common_options(parser_oracle, config_required=True)
    parser_oracle.set_defaults(func=cmd_oracle)

    parser_validate = subparsers.add_parser('validate', help='Run the invariant suite')
    parser_validate.set_defaults(func=cmd_validate)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point"""
    parser = build_parser()

    try:
        args = parser.parse_args(argv)
    except ConfigurationError as e:
        parser.print_usage(sys.stderr)
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG

    # Show help if no command provided
    if not args.command:
        parser.print_help()
        return EXIT_CONFIG

    # Execute command
    try:
        return args.func(args)
    except (ConfigurationError, OutputError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as e:
        print(f"Numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except Exception as e:
        print(f"Error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
