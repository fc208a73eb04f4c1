"""Command-line entry points: load, generate, replay, serve.

The CLI is a thin client of the HTTP service. ``load`` and local ``replay``
spin the service up in-process and talk to it through an in-process HTTP
transport, so every code path a browser would hit is exercised; ``replay
--server`` targets a running instance over the network instead. Exit codes:
0 success, 1 command failure, 2 usage error.
"""

from __future__ import annotations

import json
import tempfile
import time
import warnings
from pathlib import Path

import click
import httpx

with warnings.catch_warnings():
    # starlette 1.3 wants the httpx2 fork, which is not packaged everywhere;
    # plain httpx works fine for the in-process transport.
    warnings.filterwarnings("ignore", message="Using `httpx` with `starlette.testclient`")
    from fastapi.testclient import TestClient

from . import ingest, replay as replay_mod
from .errors import GraphTrailError
from .service import AppState, BookmarkRepository, ServiceConfig, build_state, create_app, load_config

# Pinned clock for local replays, so recorded transcripts stay byte-stable.
REPLAY_EPOCH = 1600000000


def _fail(message: str) -> "click.ClickException":
    return click.ClickException(message)


@click.group()
def main():
    """Interactive graph exploration service and tooling."""


@main.command()
@click.argument("manifest", type=click.Path(path_type=Path))
def load(manifest: Path):
    """Load a CSV dataset and print counts as the service reports them."""
    started = time.monotonic()
    try:
        dataset = ingest.load_manifest(manifest)
    except GraphTrailError as exc:
        raise _fail(exc.message) from exc
    elapsed = time.monotonic() - started
    with tempfile.TemporaryDirectory() as tmp:
        state = AppState(datasets={dataset.name: dataset}, repo=BookmarkRepository(tmp))
        with TestClient(create_app(state)) as client:
            listed = client.get("/api/datasets").json()["data"][0]
    click.echo(
        f"{listed['name']}: {listed['vertex_count']} vertices, {listed['edge_count']} edges "
        f"(loaded in {elapsed:.2f}s)"
    )


@main.command()
@click.option("--seed", type=int, required=True)
@click.option("--scale", type=int, required=True, help="Number of vertices to generate.")
@click.option("--out", "out_dir", type=click.Path(path_type=Path), required=True)
def generate(seed: int, scale: int, out_dir: Path):
    """Write a deterministic synthetic social-network dataset."""
    try:
        summary = ingest.generate(seed, scale, out_dir)
    except GraphTrailError as exc:
        raise _fail(exc.message) from exc
    click.echo(
        f"generated {summary.vertex_count} vertices, {summary.edge_count} edges "
        f"({len(summary.vertex_type_counts)} vertex types, {len(summary.edge_type_counts)} edge types) "
        f"in {summary.elapsed:.2f}s -> {summary.manifest_path}"
    )


@main.command()
@click.argument("script_path", metavar="SCRIPT", type=click.Path(path_type=Path))
@click.option("--golden", is_flag=True, help="Compare responses against the script's expect lines.")
@click.option("--server", metavar="URL", default=None, help="Replay against a running service instead of in-process.")
@click.option("--dataset", "dataset_manifest", type=click.Path(path_type=Path), default=None,
              help="Dataset manifest for in-process replay.")
@click.option("--record", "record_path", type=click.Path(path_type=Path), default=None,
              help="Write the script back with expect lines filled from this run.")
@click.option("--fixed-clock", type=int, default=REPLAY_EPOCH, show_default=True,
              help="Bookmark clock for in-process replay.")
def replay(script_path: Path, golden: bool, server: str | None, dataset_manifest: Path | None,
           record_path: Path | None, fixed_clock: int):
    """Execute an exploration script via the HTTP handlers."""
    try:
        script = replay_mod.parse_script(script_path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise _fail(f"cannot read script: {exc}") from exc
    except replay_mod.ScriptError as exc:
        raise _fail(exc.message) from exc

    if server is not None:
        client = httpx.Client(base_url=server.rstrip("/"))
        result = _run(client, script, golden)
    else:
        if dataset_manifest is None:
            raise click.UsageError("in-process replay needs --dataset (or use --server)")
        try:
            dataset = ingest.load_manifest(dataset_manifest)
        except GraphTrailError as exc:
            raise _fail(exc.message) from exc
        with tempfile.TemporaryDirectory() as tmp:
            state = AppState(
                datasets={dataset.name: dataset},
                repo=BookmarkRepository(tmp, clock=lambda: fixed_clock),
            )
            with TestClient(create_app(state)) as client:
                result = _run(client, script, golden)

    if record_path is not None:
        record_path.write_text(replay_mod.render_script(script, result.transcript), encoding="utf-8")
        click.echo(f"recorded {result.commands_run} commands -> {record_path}")
    if result.failure is not None:
        raise _fail(result.failure)
    mode = "golden ok" if golden else "ok"
    click.echo(f"{result.commands_run} commands replayed: {mode}")


def _run(client, script, golden: bool):
    try:
        return replay_mod.Replayer(client, script).run(golden=golden)
    except replay_mod.ScriptError as exc:
        raise _fail(exc.message) from exc
    except httpx.HTTPError as exc:
        raise _fail(f"transport error: {exc}") from exc
    finally:
        client.close()


@main.command()
@click.option("--config", "config_path", type=click.Path(path_type=Path), default=None)
@click.option("--host", default=None)
@click.option("--port", type=int, default=None)
@click.option("--dataset", "dataset_manifests", type=click.Path(path_type=Path), multiple=True,
              help="Dataset manifest to load at startup (repeatable; adds to config).")
@click.option("--bookmark-dir", type=click.Path(path_type=Path), default=None)
@click.option("--fixed-clock", type=int, default=None, help="Pin the bookmark clock (for reproducible transcripts).")
def serve(config_path: Path | None, host: str | None, port: int | None,
          dataset_manifests: tuple[Path, ...], bookmark_dir: Path | None, fixed_clock: int | None):
    """Run the HTTP service."""
    import uvicorn

    try:
        config = load_config(config_path)
    except (OSError, json.JSONDecodeError, GraphTrailError) as exc:
        raise _fail(f"bad config: {exc}") from exc
    if host is not None:
        config.host = host
    if port is not None:
        config.port = port
    if bookmark_dir is not None:
        config.bookmark_dir = str(bookmark_dir)
    if fixed_clock is not None:
        config.fixed_clock = fixed_clock
    config.datasets = list(config.datasets) + [str(p) for p in dataset_manifests]
    try:
        state = build_state(config)
    except GraphTrailError as exc:
        raise _fail(exc.message) from exc
    app = create_app(state)
    names = ", ".join(state.datasets) or "none"
    click.echo(f"serving on http://{config.host}:{config.port} (datasets: {names})")
    uvicorn.run(app, host=config.host, port=config.port, log_level="warning")


if __name__ == "__main__":
    main()
