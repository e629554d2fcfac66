import argparse
import sys
from pathlib import Path

from core.attractors.models import PullbackError
from core.config.configuration import Config
from core.continuity.models import EquiAttractionError, SweepError
from core.enums.exit_code import ExitCode
from core.geometry.point_cloud import GeometryError
from core.process.process import IntegrationError
from core.run.artifacts import ArtifactError
from core.run.commands import (
    CommandResult,
    cmd_equi,
    cmd_oracle,
    cmd_pullback,
    cmd_sweep,
    cmd_uniform,
    cmd_verify_bounds,
)
from core.run.run_config import ConfigError, RunConfig
from core.util.logger import Logger
from core.util.validator import ConfigValidator

COMMANDS = {
    "pullback": cmd_pullback,
    "uniform": cmd_uniform,
    "sweep": cmd_sweep,
    "equi": cmd_equi,
    "verify-bounds": cmd_verify_bounds,
}
DOMAIN_ERRORS = (
    ConfigError,
    ArtifactError,
    GeometryError,
    IntegrationError,
    PullbackError,
    SweepError,
    EquiAttractionError,
    ValueError,
)


def build_parser() -> argparse.ArgumentParser:
    config = Config.get()
    parser = argparse.ArgumentParser(
        prog="attractor-lab",
        description=config.value("app", "description", "Pullback and uniform attractor approximation."),
    )
    parser.add_argument("--version", action="version", version=str(config.value("app", "version", "1.0")))
    subparsers = parser.add_subparsers(dest="command", required=True)
    for name in (*COMMANDS, "oracle"):
        sub = subparsers.add_parser(name)
        sub.add_argument("--config", type=Path, required=name != "oracle", help="run configuration (TOML)")
        sub.add_argument("--out", type=Path, help="output directory")
        sub.add_argument("--seed", type=int, help="seed for sampled clouds and random trials")
        sub.add_argument("--tol", type=float, help="Hausdorff convergence tolerance")
        sub.add_argument("--rel-tol", type=float, dest="rel_tol", help="integrator relative tolerance")
        sub.add_argument("--threads", type=int, help="worker threads")
        sub.add_argument("--log-level", dest="log_level", help="DEBUG, INFO, WARNING, ERROR or CRITICAL")
    return parser


def run(argv: list[str] | None = None) -> int:
    """Parse arguments, run one command and return its exit status."""
    args = build_parser().parse_args(argv)
    try:
        if args.log_level:
            Logger.LEVEL = ConfigValidator.parse_log_level(args.log_level)

        base = RunConfig.from_file(args.config) if args.config is not None else RunConfig.oracle_defaults()
        cfg = base.with_overrides(
            output_dir=args.out, seed=args.seed, tol=args.tol, rel_tol=args.rel_tol, threads=args.threads
        )

        if args.command == "oracle":
            Logger.info(f"oracle -> {cfg.output_dir}")
            result: CommandResult = cmd_oracle(cfg, tol=args.tol)
        else:
            Logger.info(f"{args.command}: {cfg.system.value} -> {cfg.output_dir}")
            result = COMMANDS[args.command](cfg)
    except DOMAIN_ERRORS as exc:
        Logger.error(f"{args.command} failed: {exc}")
        print(f"error: {exc}", file=sys.stderr)
        return int(ExitCode.ERROR)

    Logger.info(f"{args.command}: {result.summary}")
    for path in result.artifacts:
        Logger.debug(f"wrote {path}")
    return int(result.exit_code)


def main():
    """Main entry point for the application."""
    sys.exit(run())


if __name__ == "__main__":
    main()
