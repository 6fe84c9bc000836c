"""File-backed session store.

Layout per session under the store root:

    <id>/meta.json            session metadata + stage fractions (atomic)
    <id>/tracks.jsonl         one persisted track record per line
    <id>/observations.jsonl   one mapped observation per line; append-only
                              while processing, immutable after done
    <id>/timeline/<digest>.jsonl   cached fused timelines per selection
    <id>/work/                transient upload area, deleted at completion

The store never contains pixel or audio sample data: only metadata,
boxes and scores (the privacy scanner enforces this). meta.json writes
go through a temp file + rename so a crash can never leave a corrupt
record; sessions found mid-flight on startup are marked failed.
"""

import json
import os
import shutil
import threading
import uuid
from datetime import datetime, timezone
from typing import Dict, Iterable, List, Optional

from .errors import NotFoundError, StateError
from .model import ModalityObservation, SessionStatus
from .pipeline import STAGES
from .tracking import PersonTrack

META = "meta.json"
TRACKS = "tracks.jsonl"
OBSERVATIONS = "observations.jsonl"
TIMELINE_DIR = "timeline"
WORK_DIR = "work"


def _utcnow() -> str:
    return datetime.now(timezone.utc).isoformat()


def _atomic_write(path: str, data: bytes) -> None:
    tmp = f"{path}.tmp-{os.getpid()}-{threading.get_ident()}"
    with open(tmp, "wb") as fh:
        fh.write(data)
        fh.flush()
        os.fsync(fh.fileno())
    os.replace(tmp, path)


class SessionStore:
    """Single-node session persistence rooted at one directory."""

    def __init__(self, root: str):
        self.root = os.path.abspath(root)
        os.makedirs(self.root, exist_ok=True)
        self._meta_lock = threading.Lock()

    # -- paths ------------------------------------------------------------

    def session_dir(self, session_id: str) -> str:
        return os.path.join(self.root, session_id)

    def work_dir(self, session_id: str) -> str:
        return os.path.join(self.session_dir(session_id), WORK_DIR)

    def _meta_path(self, session_id: str) -> str:
        return os.path.join(self.session_dir(session_id), META)

    def exists(self, session_id: str) -> bool:
        return os.path.isfile(self._meta_path(session_id))

    def list_sessions(self) -> List[str]:
        if not os.path.isdir(self.root):
            return []
        return sorted(
            name
            for name in os.listdir(self.root)
            if os.path.isfile(os.path.join(self.root, name, META))
        )

    # -- lifecycle ----------------------------------------------------------

    def create_session(self, language: str, extra: Optional[Dict] = None) -> str:
        session_id = uuid.uuid4().hex[:16]
        os.makedirs(self.work_dir(session_id), exist_ok=True)
        os.makedirs(
            os.path.join(self.session_dir(session_id), TIMELINE_DIR), exist_ok=True
        )
        meta = {
            "session_id": session_id,
            "language": language,
            "status": SessionStatus.QUEUED.value,
            "created_at": _utcnow(),
            "stages": {stage: 0.0 for stage in STAGES},
            "duration_s": None,
            "fps": None,
        }
        if extra:
            meta.update(extra)
        self.write_meta(session_id, meta)
        return session_id

    def write_meta(self, session_id: str, meta: Dict) -> None:
        blob = json.dumps(meta, indent=2).encode()
        _atomic_write(self._meta_path(session_id), blob)

    def read_meta(self, session_id: str) -> Dict:
        try:
            with open(self._meta_path(session_id), "r", encoding="utf-8") as fh:
                return json.load(fh)
        except FileNotFoundError:
            raise NotFoundError(f"unknown session {session_id!r}") from None

    def update_meta(self, session_id: str, **fields) -> Dict:
        with self._meta_lock:
            meta = self.read_meta(session_id)
            meta.update(fields)
            self.write_meta(session_id, meta)
            return meta

    def update_stage(self, session_id: str, stage: str, fraction: float) -> None:
        with self._meta_lock:
            meta = self.read_meta(session_id)
            stages = meta.setdefault("stages", {})
            # Fractions are monotone per stage.
            stages[stage] = max(stages.get(stage, 0.0), float(fraction))
            self.write_meta(session_id, meta)

    def delete_session(self, session_id: str) -> None:
        shutil.rmtree(self.session_dir(session_id), ignore_errors=True)

    def drop_work_dir(self, session_id: str) -> None:
        shutil.rmtree(self.work_dir(session_id), ignore_errors=True)

    def recover_incomplete(self) -> List[str]:
        """Mark sessions left queued/processing by a dead process as failed."""
        recovered = []
        for session_id in self.list_sessions():
            meta = self.read_meta(session_id)
            if meta.get("status") in (
                SessionStatus.QUEUED.value,
                SessionStatus.PROCESSING.value,
            ):
                self.update_meta(
                    session_id,
                    status=SessionStatus.FAILED.value,
                    error="interrupted: process terminated mid-session",
                )
                self.drop_work_dir(session_id)
                recovered.append(session_id)
        return recovered

    # -- artifacts -----------------------------------------------------------

    def write_tracks(self, session_id: str, tracks: Iterable[PersonTrack]) -> None:
        lines = [
            json.dumps(track.to_json(), separators=(",", ":")) for track in tracks
        ]
        _atomic_write(
            os.path.join(self.session_dir(session_id), TRACKS),
            ("\n".join(lines) + "\n" if lines else "").encode(),
        )

    def read_tracks(self, session_id: str) -> List[Dict]:
        path = os.path.join(self.session_dir(session_id), TRACKS)
        if not os.path.isfile(path):
            return []
        with open(path, "r", encoding="utf-8") as fh:
            return [json.loads(line) for line in fh if line.strip()]

    def append_observations(
        self, session_id: str, observations: Iterable[ModalityObservation]
    ) -> None:
        meta = self.read_meta(session_id)
        if meta.get("status") == SessionStatus.DONE.value:
            raise StateError("observations are immutable after completion")
        path = os.path.join(self.session_dir(session_id), OBSERVATIONS)
        with open(path, "a", encoding="utf-8") as fh:
            for obs in observations:
                fh.write(json.dumps(obs.to_json(), separators=(",", ":")) + "\n")

    def read_observations(self, session_id: str) -> List[ModalityObservation]:
        path = os.path.join(self.session_dir(session_id), OBSERVATIONS)
        if not os.path.isfile(path):
            return []
        with open(path, "r", encoding="utf-8") as fh:
            return [
                ModalityObservation.from_json(json.loads(line))
                for line in fh
                if line.strip()
            ]

    # -- timeline cache --------------------------------------------------------

    def _timeline_path(self, session_id: str, digest: str) -> str:
        return os.path.join(self.session_dir(session_id), TIMELINE_DIR, f"{digest}.jsonl")

    def timeline_cache_get(self, session_id: str, digest: str) -> Optional[bytes]:
        path = self._timeline_path(session_id, digest)
        if not os.path.isfile(path):
            return None
        with open(path, "rb") as fh:
            return fh.read()

    def timeline_cache_put(self, session_id: str, digest: str, blob: bytes) -> None:
        os.makedirs(
            os.path.join(self.session_dir(session_id), TIMELINE_DIR), exist_ok=True
        )
        _atomic_write(self._timeline_path(session_id, digest), blob)
