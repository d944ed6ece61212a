"""Command-line front end: ``qmatrix <command> [flags]``.

Exit codes: 0 success, 1 usage or validation error, 2 a proven identity failed.
Payloads go to stdout (or ``--out``); logs and errors go to stderr.
"""

import argparse
import sys
from collections.abc import Callable, Sequence
from datetime import datetime, timezone
from pathlib import Path

from pydantic import BaseModel, ValidationError

from app import __version__
from app.errors import ParameterError, QMatrixError
from app.helpers import envelope, new_run_id, render, run_metadata
from app.logger import logger
from app.models import (
    RESULT_MODELS,
    CenterReport,
    ClassificationReport,
    CrossValidationReport,
    IsoReport,
    PiDegreeReport,
    RepReport,
    RunConfig,
    SweepReport,
)
from app.reports import (
    center_report,
    classification_report,
    cross_validation_report,
    iso_report,
    pidegree_report,
    rep_report,
)
from app.sweep import run_sweep

UTC = timezone.utc

LIST_KEYS = ("mu", "lam")


def cmd_classify(config: RunConfig) -> ClassificationReport:
    return classification_report(config.algebra())


def cmd_pidegree(config: RunConfig) -> PiDegreeReport:
    return pidegree_report(config.algebra())


def cmd_center(config: RunConfig) -> CenterReport:
    return center_report(config.algebra(), config.deg_cap)


def cmd_rep(config: RunConfig) -> RepReport:
    return rep_report(config)


def cmd_iso(config: RunConfig) -> IsoReport | CrossValidationReport:
    if config.grid:
        return cross_validation_report(config)
    return iso_report(config)


def cmd_sweep(config: RunConfig) -> SweepReport:
    return run_sweep(config.grid_max, config.workers)


def cmd_schema(config: RunConfig) -> dict:
    schemas = {name: model.model_json_schema() for name, model in RESULT_MODELS.items()}
    schemas["config"] = RunConfig.model_json_schema()
    return schemas


COMMANDS: dict[str, Callable[[RunConfig], BaseModel | dict]] = {
    "classify": cmd_classify,
    "pidegree": cmd_pidegree,
    "center": cmd_center,
    "rep": cmd_rep,
    "iso": cmd_iso,
    "sweep": cmd_sweep,
    "schema": cmd_schema,
}


def read_config_file(path: str) -> dict:
    """Parse a ``key = value`` file; ``#`` starts a comment, mu/lam are whitespace lists."""
    try:
        text = Path(path).read_text()
    except OSError as e:
        raise ParameterError(f"cannot read config file {path}: {e.strerror}") from e
    values: dict = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ParameterError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key = key.strip().replace("-", "_")
        value = value.strip()
        values[key] = value.split() if key in LIST_KEYS else value
    return values


def _add_params(parser: argparse.ArgumentParser, *, family: bool = False) -> None:
    parser.add_argument("--m", type=int)
    parser.add_argument("--n", type=int)
    parser.add_argument("--k1", type=int)
    parser.add_argument("--k2", type=int)
    if family:
        parser.add_argument("--family", choices=("V1", "V2", "V3"))
        parser.add_argument("--mu", nargs="+", metavar="SCALAR")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="key = value file; flags override it")
    common.add_argument("--format", choices=("text", "json"))
    common.add_argument("--out", help="write the payload here instead of stdout")
    common.add_argument(
        "--metadata",
        action="store_const",
        const=True,
        help="add run id, timestamp and elapsed time to the payload",
    )

    parser = argparse.ArgumentParser(
        prog="qmatrix",
        description="Exact computations in the two-parameter quantum matrix algebra M2(alpha,beta)"
        " at roots of unity.",
    )
    parser.add_argument("--version", action="version", version=f"qmatrix {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    classify = sub.add_parser("classify", parents=[common], help="simple-module classification")
    _add_params(classify)
    pideg = sub.add_parser("pidegree", parents=[common], help="PI degree, two independent ways")
    _add_params(pideg)
    center = sub.add_parser("center", parents=[common], help="center generators and checks")
    _add_params(center)
    center.add_argument("--deg-cap", dest="deg_cap", type=int)

    rep = sub.add_parser("rep", parents=[common], help="build and check a simple module")
    _add_params(rep, family=True)
    rep.add_argument("action", nargs="?", choices=("build", "verify", "simple", "profile"))

    iso = sub.add_parser("iso", parents=[common], help="isomorphism of two modules")
    _add_params(iso, family=True)
    iso.add_argument("--lam", nargs="+", metavar="SCALAR")
    iso.add_argument(
        "--grid",
        action="store_const",
        const=True,
        help="cross-validate the criteria against the oracle on a root-of-unity grid",
    )

    sweep = sub.add_parser("sweep", parents=[common], help="PI degree over a parameter grid")
    sweep.add_argument("--grid-max", dest="grid_max", type=int)
    sweep.add_argument("--workers", type=int)

    sub.add_parser("schema", parents=[common], help="JSON Schema of every result payload")
    return parser


def load_config(args: argparse.Namespace) -> RunConfig:
    """Settings defaults, then the config file, then explicit flags."""
    values = read_config_file(args.config) if args.config else {}
    flags = {
        key: value
        for key, value in vars(args).items()
        if key not in ("command", "config") and value is not None
    }
    values.update(flags)
    return RunConfig.model_validate(values)


def _validation_message(e: ValidationError) -> str:
    parts = []
    for err in e.errors():
        loc = ".".join(str(part) for part in err["loc"])
        msg = err["msg"].removeprefix("Value error, ")
        parts.append(f"{loc}: {msg}" if loc else msg)
    return "; ".join(parts)


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
        logger.info(f"Payload written to {out}")
    else:
        sys.stdout.write(text)


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    started = datetime.now(UTC)
    run_id = new_run_id()
    try:
        config = load_config(args)
        logger.debug(f"Run {run_id}: {args.command} with {config.model_dump(exclude_unset=True)}")
        result = COMMANDS[args.command](config)
    except ValidationError as e:
        sys.stderr.write(f"qmatrix {args.command}: error: {_validation_message(e)}\n")
        return 1
    except QMatrixError as e:
        if e.exit_code == 2:
            logger.error(f"Run {run_id}: invariant violated: {e}")
        sys.stderr.write(f"qmatrix {args.command}: error: {e}\n")
        return e.exit_code

    metadata = run_metadata(run_id, started, datetime.now(UTC)) if config.metadata else None
    payload = envelope(args.command, result, metadata)
    # rep build uses --out for the matrix dump
    out = None if args.command == "rep" and config.action == "build" else config.out
    _emit(render(payload, config.format), out)
    return 0


def main() -> None:
    sys.exit(run())
