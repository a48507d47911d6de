#!/usr/bin/env python3
"""Command-line entry point for the plasmonic QRNG pipeline."""

import argparse
import json
import logging
import sys
from pathlib import Path

from dotenv import load_dotenv

from .config import PipelineConfig, RuntimeSettings, load_pipeline_config
from .errors import ConfigError, DomainError, FormatError, InputSizeError
from .pipeline import PipelineRunner, StageResult
from .profiles import ProfileCatalog
from .reports import render_csv
from .reports.renderers import templates

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    """Raised instead of argparse's exit so usage errors map to exit code 1."""


class CliArgumentParser(argparse.ArgumentParser):
    def error(self, message: str):
        raise UsageError(f"{self.prog}: error: {message}")


def parse_args(argv=None):
    common = CliArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="Pipeline config file (.json, .yaml or .yml)")
    common.add_argument("--profile", help="Named profile used when --config is absent (default: QRNG_PROFILE or lab)")
    common.add_argument("--seed", type=int, help="Override master_seed")
    common.add_argument("--out", type=Path, help="Output path (file or directory, per subcommand)")
    common.add_argument("--format", choices=("json", "csv", "text"), default="text", help="Stdout format")

    parser = CliArgumentParser(prog="plasmon-qrng", description="Plasmonic beamsplitter QRNG simulator and test suite.")
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", parents=[common], help="Simulate detections into a .qttag file")
    simulate.add_argument("--duration", type=float, help="Override duration_s")

    extract = commands.add_parser("extract", parents=[common], help="Convert .qttag records to raw bits")
    extract.add_argument("input", type=Path)

    postprocess = commands.add_parser("postprocess", parents=[common], help="Shuffle and Peres-extract a bit file")
    postprocess.add_argument("input", type=Path)

    analyze = commands.add_parser("analyze", parents=[common], help="Run the characterization battery")
    analyze.add_argument("input", type=Path)
    analyze.add_argument("--reference-prng", type=int, metavar="SEED", help="Also characterize a PCG64 sequence")

    nist = commands.add_parser("nist", parents=[common], help="Run the NIST SP 800-22 battery")
    nist.add_argument("input", type=Path)
    nist.add_argument("--raw-length", type=int, help="Treat input as raw packed bits of this length")

    report = commands.add_parser("report", parents=[common], help="Aggregate JSON outputs into one markdown document")
    report.add_argument("inputs", type=Path, nargs="+")

    profiles = commands.add_parser("profiles", parents=[common], help="List the packaged profiles")
    profiles.add_argument("--show", metavar="NAME", help="Print one profile's full config as JSON")

    return parser.parse_args(argv)


def resolve_config(args: argparse.Namespace, settings: RuntimeSettings, catalog: ProfileCatalog) -> PipelineConfig:
    if args.config is not None:
        config = load_pipeline_config(args.config)
    else:
        config = catalog.require(args.profile or settings.profile)

    updates: dict = {}
    seed = args.seed if args.seed is not None else settings.master_seed
    if seed is not None:
        if not 0 <= seed < 2**64:
            raise ConfigError(f"seed must be in [0, 2^64), got {seed}")
        updates["master_seed"] = seed
    if getattr(args, "duration", None) is not None:
        if not args.duration > 0:
            raise ConfigError(f"duration must be > 0, got {args.duration}")
        updates["duration_s"] = args.duration
    return config.model_copy(update=updates) if updates else config


def emit(result: StageResult, output_format: str) -> None:
    kind = result.report.get("kind", result.stage) if isinstance(result.report, dict) else result.stage
    match output_format:
        case "json":
            print(json.dumps(result.report, indent=2, sort_keys=True))
        case "csv":
            print(render_csv(kind, result.report), end="")
        case _:
            print(result.text, end="" if result.text.endswith("\n") else "\n")
    logger.info("%s finished in %d ms", result.stage, result.timing_ms)


def run_profiles(args: argparse.Namespace, catalog: ProfileCatalog) -> int:
    if args.show:
        config = catalog.require(args.show)
        print(json.dumps(config.model_dump(mode="json"), indent=2, sort_keys=True))
        return EXIT_OK
    hits = catalog.list_profiles()
    if args.format == "json":
        print(json.dumps([hit.model_dump() for hit in hits], indent=2))
    else:
        print(templates().render("profiles", hits=hits), end="")
    return EXIT_OK


def run(args: argparse.Namespace, settings: RuntimeSettings) -> int:
    catalog = ProfileCatalog()
    if args.command == "profiles":
        return run_profiles(args, catalog)

    runner = PipelineRunner(resolve_config(args, settings, catalog), workers=settings.workers)
    match args.command:
        case "simulate":
            result = runner.simulate(args.out or Path("simulation.qttag"))
        case "extract":
            result = runner.extract(args.input, args.out or args.input.with_suffix(".bits"))
        case "postprocess":
            result = runner.postprocess(args.input, args.out or args.input.with_suffix(".extracted.bits"))
        case "analyze":
            result = runner.analyze(args.input, args.out or Path("analysis"), args.reference_prng)
        case "nist":
            result = runner.nist(args.input, args.out, args.raw_length)
        case "report":
            result = runner.report(args.inputs, args.out)
            if args.out is not None:
                return EXIT_OK
        case _:
            raise UsageError(f"unknown command: {args.command}")
    emit(result, args.format)
    return result.exit_code


def main(argv=None) -> int:
    load_dotenv()
    try:
        settings = RuntimeSettings()
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=settings.log_level)

    try:
        return run(parse_args(argv), settings)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except ConfigError as exc:
        logger.error("%s", exc)
        return EXIT_USAGE
    except (FormatError, DomainError, InputSizeError, OSError) as exc:
        logger.error("%s", exc)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
