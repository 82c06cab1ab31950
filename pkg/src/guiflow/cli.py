"""Command-line entry points: analyze, serve, replay, export."""

from __future__ import annotations

import sys
from pathlib import Path

import click

from . import __version__
from .bundle import load_bundle
from .errors import GuiflowError
from .modeldb import load as load_db
from .modeldb import make_meta, save
from .report import export_dot, export_markdown, import_json, replay_report
from .ripper import RipConfig, rip
from .service import ServiceConfig, serve
from .universe import build_static_universe


@click.group()
@click.version_option(version=__version__)
def main():
    """Analyze app bundles and work with the resulting model databases."""


@main.command()
@click.argument("bundle_path", type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("-o", "--out", "out_db_dir", required=True,
              type=click.Path(file_okay=False, path_type=Path), help="output database directory")
@click.option("--max-states", default=10000, show_default=True, type=click.IntRange(min=1))
@click.option("--max-depth", default=50, show_default=True, type=click.IntRange(min=1))
def analyze(bundle_path: Path, out_db_dir: Path, max_states: int, max_depth: int):
    """Run static and dynamic analysis on BUNDLE_PATH into a database."""
    try:
        bundle = load_bundle(bundle_path)
        universe = build_static_universe(bundle)
        graph = rip(bundle, RipConfig(max_states=max_states, max_depth=max_depth))
        meta = make_meta(bundle.app_id, bundle.version, graph.truncated, __version__)
        save(out_db_dir, universe, graph, meta)
    except GuiflowError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(f"states={len(graph.states)} edges={len(graph.edges)} "
               f"truncated={'true' if graph.truncated else 'false'}")


@main.command("serve")
@click.option("--db", "db_dir", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
@click.option("--bind", default="127.0.0.1:8600", show_default=True, help="host:port to listen on")
@click.option("--session-ttl", default=3600, show_default=True, type=click.IntRange(min=1),
              help="idle session lifetime in seconds")
def serve_cmd(db_dir: Path, bind: str, session_ttl: int):
    """Serve the reporting API over a model database."""
    try:
        serve(ServiceConfig(db_dir=db_dir, bind_address=bind, session_ttl_seconds=session_ttl))
    except GuiflowError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


@main.command()
@click.argument("report_path", type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--bundle", "bundle_path", required=True,
              type=click.Path(exists=True, file_okay=False, path_type=Path))
def replay(report_path: Path, bundle_path: Path):
    """Check whether REPORT_PATH reproduces against a bundle."""
    try:
        report = import_json(report_path.read_bytes())
        bundle = load_bundle(bundle_path)
        verdict = replay_report(report, bundle)
    except GuiflowError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    click.echo(verdict.describe())
    if not verdict.is_reproducible:
        sys.exit(2)


@main.command()
@click.argument("input_path", type=click.Path(exists=True, path_type=Path))
@click.option("--format", "fmt", required=True, type=click.Choice(["markdown", "dot"]))
def export(input_path: Path, fmt: str):
    """Render a report as markdown, or a database's graph as DOT.

    INPUT_PATH is a report JSON file for --format markdown and a model
    database directory for --format dot.
    """
    try:
        if fmt == "markdown":
            if input_path.is_dir():
                raise click.UsageError("--format markdown expects a report JSON file")
            report = import_json(input_path.read_bytes())
            click.echo(export_markdown(report), nl=False)
        else:
            if not input_path.is_dir():
                raise click.UsageError("--format dot expects a model database directory")
            db = load_db(input_path)
            click.echo(export_dot(db.graph), nl=False)
    except GuiflowError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


if __name__ == "__main__":
    main()
