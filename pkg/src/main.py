"""
Command line entry point for the fractal entropy lab
Batch analyses of self-similar systems, lattice measures and parameter families
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError as PydanticValidationError

from src import __version__
from src.config.settings import settings
from src.models.run_config import Command, OutputFormat, RunConfig
from src.utils.helpers import FileHandler, ValidationError

logger = logging.getLogger(__name__)

# Per-command numeric flags: (flag, parameter name, type)
PARAMETER_FLAGS = [
    ("--n", "n", str),
    ("--m", "m", int),
    ("--q", "q", float),
    ("--eps", "eps", float),
    ("--sigma", "sigma", float),
    ("--L", "L", int),
    ("--k", "k", int),
    ("--p", "p", int),
    ("--n-max", "n_max", int),
    ("--depth", "depth", int),
    ("--grid-step", "grid_step", float),
    ("--family", "family", str),
]


def setup_logging():
    """Configures the logging system; records go to stderr so stdout stays a clean table"""
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.LOG_TO_FILE:
        handlers.append(logging.FileHandler("fractal_entropy.log"))
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL, logging.INFO),
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=handlers,
        force=True,
    )


def validate_configuration() -> bool:
    """Validates the environment configuration"""
    try:
        settings.validate()
        logger.info("Configuration validated successfully")
        return True
    except ValueError as e:
        logger.error(f"Configuration error: {e}")
        return False


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fractal-entropy",
        description="Entropy, separation and inverse-theorem diagnostics for self-similar measures",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON run configuration; flags override its fields")
    parser.add_argument("--command", choices=[c.value for c in Command], help="Analysis to run")
    parser.add_argument("--input", dest="inputs", action="append",
                        help="Named system or JSON file (repeat for commands taking two inputs)")
    parser.add_argument("--out", help="Output file (stdout when omitted)")
    parser.add_argument("--format", choices=[f.value for f in OutputFormat], help="csv or json")
    parser.add_argument("--threads", type=int, help="Worker count")
    parser.add_argument("--budget", type=int, help="Maximum number of compositions")
    for flag, name, kind in PARAMETER_FLAGS:
        parser.add_argument(flag, dest=f"param_{name}", type=kind, help=f"Parameter {name}")
    return parser


def build_config(args: argparse.Namespace) -> RunConfig:
    """
    Merges a configuration file with command line flags

    Raises:
        ValidationError: Unreadable configuration file or invalid field values
    """
    data: Dict[str, Any] = FileHandler.load_json(args.config, "run configuration") if args.config else {}
    parameters = dict(data.get("parameters", {}))
    for _, name, _ in PARAMETER_FLAGS:
        value = getattr(args, f"param_{name}")
        if value is not None:
            parameters[name] = value
    data["parameters"] = parameters
    for field, value in (("command", args.command), ("inputs", args.inputs), ("output", args.out),
                         ("format", args.format), ("threads", args.threads), ("budget", args.budget)):
        if value is not None:
            data[field] = value
    try:
        return RunConfig(**data)
    except PydanticValidationError as e:
        raise ValidationError(f"invalid run configuration: {e}")


def main(argv: Optional[List[str]] = None) -> int:
    """Parses arguments, runs the command and returns the exit status"""
    setup_logging()
    if not validate_configuration():
        return 2
    args = build_parser().parse_args(argv)
    try:
        config = build_config(args)
    except ValidationError as e:
        logger.error(f"❌ {e}")
        return 2

    from src.services.run import RunService

    return RunService().run(config)


if __name__ == "__main__":
    sys.exit(main())
