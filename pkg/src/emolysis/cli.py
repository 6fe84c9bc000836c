"""Command line entry points: one-shot analysis and server launch.

`analyze` runs the full pipeline in-process and writes one meta line
followed by one TickRecord JSON line per tick; for identical config and
input the record lines are byte-identical to the service's timeline
output. Flag names mirror the API query parameters one-to-one.

Exit codes: 0 success, 1 validation error, 2 ingest failure,
3 backend failure.
"""

import json
import socket
import sys
from dataclasses import replace
from typing import Optional

import click

from .config import (
    DEFAULT_PORT,
    DEFAULT_STORE,
    ENV_PORT,
    ENV_STORE,
    AnalysisConfig,
    ServerConfig,
    load_analysis_config,
)
from .errors import BackendError, IngestError, RegistryError, ValidationError
from .fusion import Selection, SessionFusion, tick_record_to_json_line
from .model import SUPPORTED_LANGUAGES, ModalityTag
from .pipeline import run_pipeline

EXIT_VALIDATION = 1
EXIT_INGEST = 2
EXIT_BACKEND = 3


@click.group()
def main() -> None:
    """Group emotion analysis toolkit."""


def _parse_modalities(value: Optional[str]) -> frozenset:
    if not value:
        return frozenset(ModalityTag)
    try:
        tags = frozenset(ModalityTag(m.strip()) for m in value.split(",") if m.strip())
    except ValueError:
        raise ValidationError(
            f"unknown modality in {value!r}; expected subset of "
            f"{[t.value for t in ModalityTag]}"
        ) from None
    if not tags:
        raise ValidationError("--modalities must name at least one modality")
    return tags


def _parse_persons(value: Optional[str]) -> frozenset:
    if not value:
        return frozenset()
    try:
        return frozenset(int(p) for p in value.split(",") if p.strip())
    except ValueError:
        raise ValidationError(f"--persons must be a csv of ints: {value!r}") from None


@main.command()
@click.argument("video", type=str)
@click.option("--language", type=click.Choice(SUPPORTED_LANGUAGES), default="en",
              show_default=True, help="Transcript language for the linguistic model.")
@click.option("--persons", default=None, help="CSV of person ids (default: all).")
@click.option("--modalities", default=None,
              help="CSV subset of visual,audio,linguistic (default: all).")
@click.option("--out", type=str, default=None,
              help="Output JSONL path (default: stdout).")
@click.option("--backend", default=None,
              help="Backend plugin name for all modalities (default: reference).")
@click.option("--tick-s", type=float, default=None, help="Fusion tick size.")
@click.option("--window-s", type=float, default=None, help="Audio window length.")
@click.option("--stride-s", type=float, default=None, help="Audio window stride.")
@click.option("--config", "config_path", type=str, default=None,
              help="YAML config file (flags override it).")
def analyze(video, language, persons, modalities, out, backend,
            tick_s, window_s, stride_s, config_path) -> None:
    """Analyze VIDEO and write fused timeline records as JSONL."""
    try:
        config = load_analysis_config(config_path)
        overrides = {}
        if tick_s is not None:
            overrides["tick_s"] = tick_s
        if window_s is not None:
            overrides["window_s"] = window_s
        if stride_s is not None:
            overrides["stride_s"] = stride_s
        if backend is not None:
            overrides["backends"] = {tag.value: backend for tag in ModalityTag}
        if overrides:
            config = replace(config, **overrides)
        selection = Selection(
            persons=_parse_persons(persons),
            modalities=_parse_modalities(modalities),
        )
    except (ValidationError, RegistryError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    except FileNotFoundError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    try:
        result = run_pipeline(video, language, config)
    except IngestError as exc:
        click.echo(f"ingest error: {exc}", err=True)
        sys.exit(EXIT_INGEST)
    except (BackendError, RegistryError) as exc:
        click.echo(f"backend error: {exc}", err=True)
        sys.exit(EXIT_BACKEND)
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    try:
        fusion = SessionFusion(
            result.observations,
            result.person_ids,
            result.grid,
            config.weights_by_tag(),
        )
        records = fusion.build_timeline(selection)
    except ValidationError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    meta_line = json.dumps(
        {
            "meta": {
                "duration_s": result.info.duration_s,
                "fps": result.info.fps,
                "language": language,
                "tick_s": config.tick_s,
                "persons": result.person_ids,
                "modalities": result.modalities_present,
            }
        },
        separators=(",", ":"),
    )
    lines = [meta_line] + [tick_record_to_json_line(r) for r in records]
    payload = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        click.echo(payload, nl=False)


@main.command()
@click.option("--port", type=int, default=None,
              help=f"Port to bind (default: ${ENV_PORT} or {DEFAULT_PORT}).")
@click.option("--store", "store_dir", type=str, default=None,
              help=f"Session store directory (default: ${ENV_STORE} or {DEFAULT_STORE}).")
@click.option("--workers", type=int, default=None,
              help="Worker pool size (default: CPU count).")
@click.option("--ui-dir", type=str, default=None,
              help="Static UI bundle to serve at / (default: $EMOLYSIS_UI).")
@click.option("--config", "config_path", type=str, default=None,
              help="YAML config file for analysis settings.")
def serve(port, store_dir, workers, ui_dir, config_path) -> None:
    """Run the session service."""
    from .config import server_config_from_env
    from .service import serve as run_server

    try:
        analysis = load_analysis_config(config_path)
        server = server_config_from_env(store_dir=store_dir, port=port)
        if workers is not None:
            server = ServerConfig(
                store_dir=server.store_dir, port=server.port,
                workers=workers, ui_dir=ui_dir or server.ui_dir,
            )
        elif ui_dir is not None:
            server = ServerConfig(
                store_dir=server.store_dir, port=server.port,
                workers=server.workers, ui_dir=ui_dir,
            )
    except (ValidationError, FileNotFoundError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)

    # Bind check up front so an occupied port is a clean exit 1.
    probe_socket = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    try:
        probe_socket.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
        probe_socket.bind(("0.0.0.0", server.port))
    except OSError as exc:
        click.echo(f"error: cannot bind port {server.port}: {exc}", err=True)
        sys.exit(EXIT_VALIDATION)
    finally:
        probe_socket.close()

    run_server(server, analysis)


if __name__ == "__main__":
    main()
