"""Command-line entry point: ``logbb verify | residue | chern | surface-ledger``."""

import json
import logging
import sys
from pathlib import Path
from typing import Any, NoReturn

import click
from pydantic import BaseModel, ValidationError

from logbb.algebra.poly import to_rational
from logbb.app_utils.config import get_settings, use_settings
from logbb.app_utils.telemetry import ReportSink, setup_logging
from logbb.errors import EXIT_INPUT, EXIT_INTERNAL, EXIT_MISMATCH, InputError, LogbbError
from logbb.scene import (
    chern_report,
    load_scene,
    residue_at,
    run_global,
    surface_ledger,
)

logger = logging.getLogger(__name__)

scene_argument = click.argument(
    "scene_path", metavar="SCENE", type=click.Path(exists=True, dir_okay=False, path_type=Path)
)
format_option = click.option(
    "--format",
    "output_format",
    type=click.Choice(["json", "md"]),
    default="json",
    show_default=True,
    help="Report format written to stdout",
)


def parse_point(text: str) -> tuple[int, tuple]:
    """``CHART:c1,c2,...`` -> (chart, rational coordinates)."""
    chart_text, sep, coords_text = text.partition(":")
    if not sep or not coords_text:
        raise InputError(f"expected CHART:c1,c2,..., got {text!r}")
    try:
        chart = int(chart_text)
    except ValueError as exc:
        raise InputError(f"chart index {chart_text!r} is not an integer") from exc
    coords = tuple(to_rational(c.strip()) for c in coords_text.split(","))
    return chart, coords


def _write(report: BaseModel, output_format: str) -> None:
    if output_format == "md":
        click.echo(report.to_markdown(), nl=False)
    else:
        click.echo(json.dumps(report.model_dump(mode="json"), indent=2))


def _fail(message: str, exit_code: int) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    sys.exit(exit_code)


class LogbbGroup(click.Group):
    """Maps library errors to exit codes; anything else is an internal error."""

    def invoke(self, ctx: click.Context) -> Any:
        try:
            return super().invoke(ctx)
        except (click.ClickException, click.exceptions.Exit, click.Abort):
            raise
        except LogbbError as exc:
            _fail(str(exc), exc.exit_code)
        except ValidationError as exc:
            _fail(f"invalid settings: {exc}", EXIT_INPUT)
        except Exception as exc:
            logger.exception("internal error")
            click.echo(f"internal error: {type(exc).__name__}: {exc}", err=True)
            sys.exit(EXIT_INTERNAL)


@click.group(cls=LogbbGroup)
@click.option("--cloud-log", is_flag=True, default=False, help="Send reports to Cloud Logging")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Logging level (default: LOGBB_LOG_LEVEL or WARNING)",
)
@click.pass_context
def cli(ctx: click.Context, cloud_log: bool, log_level: str | None) -> None:
    """Exact log Baum-Bott residues and global residue checks."""
    overrides: dict = {}
    if cloud_log:
        overrides["cloud_logging"] = True
    if log_level is not None:
        overrides["log_level"] = log_level.upper()
    settings = get_settings().model_copy(update=overrides)
    use_settings(settings)
    setup_logging(settings.log_level)
    ctx.obj = ReportSink(settings)


@cli.command()
@scene_argument
@click.option("--phi", default=None, help="Characteristic polynomial in c1..cn, e.g. 'c1^3'")
@click.option(
    "--jobs", type=click.IntRange(min=1), default=None, help="Worker threads for per-point residues"
)
@format_option
@click.pass_obj
def verify(
    sink: ReportSink,
    scene_path: Path,
    phi: str | None,
    jobs: int | None,
    output_format: str,
) -> None:
    """Sum the local residues of SCENE and compare with the Chern-side integral."""
    settings = get_settings()
    if jobs is not None:
        settings = settings.model_copy(update={"jobs": jobs})
        use_settings(settings)
    scene = load_scene(scene_path)
    report = run_global(scene, phi, settings)
    sink.emit(report, ok=report.ok)
    _write(report, output_format)
    if not report.ok:
        sys.exit(EXIT_MISMATCH)


@cli.command()
@scene_argument
@click.option("--point", "point_text", required=True, help="CHART:c1,c2,...")
@click.option("--phi", default=None, help="Characteristic polynomial in c1..cn")
@format_option
@click.pass_obj
def residue(
    sink: ReportSink, scene_path: Path, point_text: str, phi: str | None, output_format: str
) -> None:
    """Local invariants of one singular point of SCENE."""
    chart, coords = parse_point(point_text)
    scene = load_scene(scene_path)
    record = residue_at(scene, chart, coords, phi)
    sink.emit(record)
    if output_format == "md":
        for key, value in record.model_dump(mode="json").items():
            click.echo(f"- {key}: {value}")
    else:
        click.echo(json.dumps(record.model_dump(mode="json"), indent=2))


@cli.command()
@scene_argument
@click.option("--phi", default=None, help="Characteristic polynomial in c1..cn")
@format_option
@click.pass_obj
def chern(sink: ReportSink, scene_path: Path, phi: str | None, output_format: str) -> None:
    """Characteristic classes and the Chern-side integral of SCENE."""
    scene = load_scene(scene_path)
    report = chern_report(scene, phi)
    sink.emit(report)
    _write(report, output_format)


@cli.command("surface-ledger")
@scene_argument
@format_option
@click.pass_obj
def surface_ledger_command(sink: ReportSink, scene_path: Path, output_format: str) -> None:
    """GSV, Camacho-Sad and BB - Res^log ledgers of a surface SCENE."""
    scene = load_scene(scene_path)
    report = surface_ledger(scene)
    sink.emit(report, ok=report.ok)
    _write(report, output_format)
    if not report.ok:
        sys.exit(EXIT_MISMATCH)


def main() -> None:
    cli()


if __name__ == "__main__":
    main()
