"""HTTP/WebSocket session service.

Endpoints (consumed by the CLI parity tests and the web UI):

    POST /api/sessions                multipart (file, language) -> {"session_id": s}
    GET  /api/sessions/{id}           metadata + stage fractions
    GET  /api/sessions/{id}/persons   persisted track records
    GET  /api/sessions/{id}/timeline  ?persons=1,2&modalities=visual,audio&from=0&to=30
    GET  /api/backends                registered backend descriptors
    WS   /api/sessions/{id}/events    progress stream, then a terminal status

Uploads are processed asynchronously on a bounded worker pool; the
uploaded media lives only in the session's transient work directory and
is deleted the moment processing finishes, so a completed store holds
nothing but metadata and scores. Fused timelines are cached per
canonical selection digest; a cache hit returns the exact bytes a
recompute would produce.
"""

import asyncio
import logging
import math
import os
import shutil
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from contextlib import asynccontextmanager
from typing import Dict, List, Optional, Tuple

from fastapi import FastAPI, File, Form, HTTPException, Query, UploadFile, WebSocket
from fastapi.responses import Response
from starlette.websockets import WebSocketDisconnect

from .backends import available_backends
from .config import AnalysisConfig, ServerConfig
from .errors import EmolysisError, IngestError, ValidationError
from .fusion import Selection, SessionFusion, tick_record_to_json_line
from .media.ingest import probe
from .model import SUPPORTED_LANGUAGES, ModalityTag, SessionStatus
from .pipeline import STAGES, run_pipeline
from .store import SessionStore
from .windowing import TickGrid

log = logging.getLogger(__name__)

_POLL_S = 0.05


class SessionEvents:
    """Append-only event log with full replay for late subscribers."""

    def __init__(self):
        self._events: List[dict] = []
        self._terminal = False
        self._lock = threading.Lock()

    def append(self, event: dict, terminal: bool = False) -> None:
        with self._lock:
            self._events.append(event)
            self._terminal = self._terminal or terminal

    def read_from(self, cursor: int) -> Tuple[List[dict], bool]:
        with self._lock:
            return self._events[cursor:], self._terminal


def _status_event(session_id: str, status: str) -> dict:
    return {"type": "status", "session_id": session_id, "status": status}


def _progress_event(
    session_id: str, stage: str, fraction: float, message: str
) -> dict:
    return {
        "type": "progress",
        "session_id": session_id,
        "stage": stage,
        "fraction": fraction,
        "message": message,
    }


def create_app(
    store_dir: str,
    analysis_config: Optional[AnalysisConfig] = None,
    workers: Optional[int] = None,
    ui_dir: Optional[str] = None,
) -> FastAPI:
    @asynccontextmanager
    async def lifespan(_: FastAPI):
        yield
        state.executor.shutdown(wait=False, cancel_futures=True)
        # Flush anything still in flight as failed so a restart never
        # reports a phantom "processing" session.
        for session_id in sorted(state.active):
            try:
                store.update_meta(
                    session_id,
                    status=SessionStatus.FAILED.value,
                    error="interrupted: server shut down mid-session",
                )
                store.drop_work_dir(session_id)
            except EmolysisError:
                pass

    app = FastAPI(title="emolysis", version="0.1.0", lifespan=lifespan)
    store = SessionStore(store_dir)
    recovered = store.recover_incomplete()
    if recovered:
        log.warning("marked %d interrupted sessions failed", len(recovered))

    state = app.state
    state.store = store
    state.analysis_config = analysis_config or AnalysisConfig()
    state.executor = ThreadPoolExecutor(
        max_workers=workers or os.cpu_count() or 2,
        thread_name_prefix="emolysis-session",
    )
    state.events: Dict[str, SessionEvents] = {}
    state.active: set = set()
    state.fusion_cache: Dict[str, SessionFusion] = {}
    state.fusion_lock = threading.Lock()

    # -- session lifecycle -------------------------------------------------

    def _process_session(session_id: str, media_path: str, language: str) -> None:
        events = state.events[session_id]
        config = state.analysis_config

        def progress(stage: str, fraction: float, message: str = "") -> None:
            store.update_stage(session_id, stage, fraction)
            events.append(_progress_event(session_id, stage, fraction, message))

        try:
            store.update_meta(session_id, status=SessionStatus.PROCESSING.value)
            events.append(_status_event(session_id, SessionStatus.PROCESSING.value))
            result = run_pipeline(media_path, language, config, progress=progress)
            store.write_tracks(session_id, result.tracks)
            store.append_observations(session_id, result.observations)
            fusion = SessionFusion(
                result.observations,
                result.person_ids,
                result.grid,
                config.weights_by_tag(),
            )
            default_selection = Selection()
            blob = _render_jsonl(fusion.build_timeline(default_selection))
            store.timeline_cache_put(session_id, default_selection.digest(), blob)
            store.drop_work_dir(session_id)
            store.update_meta(
                session_id,
                status=SessionStatus.DONE.value,
                stages={stage: 1.0 for stage in STAGES},
                persons=result.person_ids,
                modalities=result.modalities_present,
                ticks=result.grid.ticks,
            )
            events.append(
                _status_event(session_id, SessionStatus.DONE.value), terminal=True
            )
        except Exception as exc:
            log.exception("session %s failed", session_id)
            store.drop_work_dir(session_id)
            store.update_meta(
                session_id, status=SessionStatus.FAILED.value, error=str(exc)
            )
            events.append(
                _status_event(session_id, SessionStatus.FAILED.value), terminal=True
            )
        finally:
            state.active.discard(session_id)

    @app.post("/api/sessions")
    async def create_session(
        file: UploadFile = File(...), language: str = Form(...)
    ) -> dict:
        if language not in SUPPORTED_LANGUAGES:
            raise HTTPException(
                status_code=400,
                detail=f"unsupported language {language!r}; "
                f"expected one of {list(SUPPORTED_LANGUAGES)}",
            )
        staging = os.path.join(store.root, f".upload-{uuid.uuid4().hex[:8]}")
        os.makedirs(staging, exist_ok=True)
        media_path = os.path.join(staging, "upload.media")
        try:
            with open(media_path, "wb") as out:
                shutil.copyfileobj(file.file, out)
            try:
                info = probe(media_path)
            except (IngestError, ValidationError) as exc:
                raise HTTPException(
                    status_code=422, detail=f"upload not decodable: {exc}"
                ) from exc
            session_id = store.create_session(
                language,
                extra={
                    "duration_s": info.duration_s,
                    "fps": info.fps,
                    "width": info.width,
                    "height": info.height,
                    "has_audio": info.has_audio,
                    "config": state.analysis_config.to_json(),
                },
            )
            final_path = os.path.join(store.work_dir(session_id), "upload.media")
            os.replace(media_path, final_path)
        finally:
            shutil.rmtree(staging, ignore_errors=True)

        state.events[session_id] = SessionEvents()
        state.events[session_id].append(
            _status_event(session_id, SessionStatus.QUEUED.value)
        )
        state.active.add(session_id)
        state.executor.submit(_process_session, session_id, final_path, language)
        return {"session_id": session_id}

    # -- queries ----------------------------------------------------------

    def _meta_or_404(session_id: str) -> dict:
        try:
            return store.read_meta(session_id)
        except EmolysisError:
            raise HTTPException(
                status_code=404, detail=f"unknown session {session_id!r}"
            ) from None

    @app.get("/api/sessions/{session_id}")
    def get_session(session_id: str) -> dict:
        return _meta_or_404(session_id)

    @app.get("/api/sessions/{session_id}/persons")
    def get_persons(session_id: str) -> list:
        _meta_or_404(session_id)
        return store.read_tracks(session_id)

    @app.get("/api/backends")
    def get_backends() -> list:
        return [descriptor.to_json() for descriptor in available_backends()]

    def _fusion_for(session_id: str) -> SessionFusion:
        with state.fusion_lock:
            fusion = state.fusion_cache.get(session_id)
            if fusion is None:
                meta = store.read_meta(session_id)
                observations = store.read_observations(session_id)
                grid = TickGrid.for_duration(
                    meta["duration_s"], meta["config"]["tick_s"]
                )
                fusion = SessionFusion(
                    observations,
                    meta.get("persons", []),
                    grid,
                    state.analysis_config.weights_by_tag(),
                )
                state.fusion_cache[session_id] = fusion
        return fusion

    @app.get("/api/sessions/{session_id}/timeline")
    def get_timeline(
        session_id: str,
        persons: Optional[str] = Query(default=None),
        modalities: Optional[str] = Query(default=None),
        from_s: float = Query(default=0.0, alias="from"),
        to_s: Optional[float] = Query(default=None, alias="to"),
        format: str = Query(default="json"),
    ) -> Response:
        meta = _meta_or_404(session_id)
        if meta["status"] != SessionStatus.DONE.value:
            raise HTTPException(
                status_code=409,
                detail=f"session is {meta['status']}, timeline needs status=done",
            )
        selection = _parse_selection(persons, modalities)
        fusion = _fusion_for(session_id)
        try:
            fusion.validate_selection(selection)
        except ValidationError as exc:
            raise HTTPException(status_code=400, detail=str(exc)) from None

        digest = selection.digest()
        blob = store.timeline_cache_get(session_id, digest)
        if blob is None:
            blob = _render_jsonl(fusion.build_timeline(selection))
            store.timeline_cache_put(session_id, digest, blob)

        lines = blob.splitlines()
        tick_s = meta["config"]["tick_s"]
        duration = meta["duration_s"]
        lo, hi = _tick_range(from_s, to_s, tick_s, duration, len(lines))
        lines = lines[lo:hi]
        if format == "jsonl":
            body = b"\n".join(lines) + (b"\n" if lines else b"")
            return Response(content=body, media_type="application/x-ndjson")
        return Response(
            content=b"[" + b",".join(lines) + b"]", media_type="application/json"
        )

    # -- event stream ---------------------------------------------------------

    @app.websocket("/api/sessions/{session_id}/events")
    async def stream_events(websocket: WebSocket, session_id: str) -> None:
        await websocket.accept()
        try:
            if not store.exists(session_id):
                await websocket.send_json(
                    {"type": "error", "error": f"unknown session {session_id!r}"}
                )
                return
            events = state.events.get(session_id)
            if events is None:
                # Session from a previous process: synthesize a snapshot.
                meta = store.read_meta(session_id)
                for stage in STAGES:
                    fraction = meta.get("stages", {}).get(stage, 0.0)
                    await websocket.send_json(
                        _progress_event(session_id, stage, fraction, "")
                    )
                await websocket.send_json(_status_event(session_id, meta["status"]))
                return
            cursor = 0
            while True:
                batch, terminal = events.read_from(cursor)
                for event in batch:
                    await websocket.send_json(event)
                cursor += len(batch)
                if terminal and not events.read_from(cursor)[0]:
                    break
                await asyncio.sleep(_POLL_S)
        except WebSocketDisconnect:
            pass
        finally:
            try:
                await websocket.close()
            except RuntimeError:
                pass

    if ui_dir and os.path.isdir(ui_dir):
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def _render_jsonl(records) -> bytes:
    return (
        "".join(tick_record_to_json_line(record) + "\n" for record in records)
    ).encode()


def _parse_selection(persons: Optional[str], modalities: Optional[str]) -> Selection:
    person_ids = frozenset()
    if persons:
        try:
            person_ids = frozenset(int(p) for p in persons.split(",") if p.strip())
        except ValueError:
            raise HTTPException(
                status_code=400, detail=f"persons must be a csv of ints: {persons!r}"
            ) from None
    tags = frozenset(ModalityTag)
    if modalities:
        try:
            tags = frozenset(
                ModalityTag(m.strip()) for m in modalities.split(",") if m.strip()
            )
        except ValueError:
            raise HTTPException(
                status_code=400,
                detail=f"unknown modality in {modalities!r}; expected subset of "
                f"{[t.value for t in ModalityTag]}",
            ) from None
    if not tags:
        raise HTTPException(status_code=400, detail="modalities must be non-empty")
    return Selection(persons=person_ids, modalities=tags)


def _tick_range(
    from_s: float,
    to_s: Optional[float],
    tick_s: float,
    duration_s: float,
    n_ticks: int,
) -> Tuple[int, int]:
    """Clamp [from, to) to the session and convert to tick line indices."""
    start = max(from_s, 0.0)
    end = duration_s if to_s is None else min(to_s, duration_s)
    lo = max(math.ceil(start / tick_s - 1e-9), 0)
    hi = min(math.ceil(end / tick_s - 1e-9), n_ticks)
    return lo, max(hi, lo)


def serve(config: ServerConfig, analysis_config: Optional[AnalysisConfig] = None):
    """Run the service under uvicorn (blocking)."""
    import uvicorn

    app = create_app(
        store_dir=config.store_dir,
        analysis_config=analysis_config,
        workers=config.workers,
        ui_dir=config.ui_dir,
    )
    uvicorn.run(app, host="0.0.0.0", port=config.port, log_level="info")
