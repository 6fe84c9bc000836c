import json
import os

import pytest

from emolysis.errors import NotFoundError, StateError
from emolysis.model import ModalityTag, SessionStatus
from emolysis.privacy import scan_store
from emolysis.store import SessionStore
from emolysis.tracking import PersonTrack
from helpers import joy_obs


@pytest.fixture()
def store(tmp_path):
    return SessionStore(str(tmp_path / "store"))


class TestStoreLifecycle:
    def test_create_and_read_meta(self, store):
        sid = store.create_session("en")
        meta = store.read_meta(sid)
        assert meta["status"] == "queued"
        assert meta["language"] == "en"
        assert set(meta["stages"]) == {"ingest", "visual", "audio", "linguistic", "fuse"}

    def test_unknown_session(self, store):
        with pytest.raises(NotFoundError):
            store.read_meta("nope")

    def test_stage_fractions_monotone(self, store):
        sid = store.create_session("en")
        store.update_stage(sid, "visual", 0.5)
        store.update_stage(sid, "visual", 0.3)  # regressions are ignored
        assert store.read_meta(sid)["stages"]["visual"] == 0.5

    def test_observations_roundtrip_and_append_only(self, store):
        sid = store.create_session("en")
        obs = [
            joy_obs(ModalityTag.VISUAL, 0.0, 1.0, joy=0.5, person=0),
            joy_obs(ModalityTag.AUDIO, 0.0, 1.0, joy=0.25),
        ]
        store.append_observations(sid, obs)
        assert store.read_observations(sid) == obs
        store.update_meta(sid, status=SessionStatus.DONE.value)
        with pytest.raises(StateError):
            store.append_observations(sid, obs)

    def test_tracks_roundtrip(self, store):
        sid = store.create_session("en")
        track = PersonTrack(person_id=0)
        track.boxes.append((0.0, (1.0, 2.0, 3.0, 4.0)))
        store.write_tracks(sid, [track])
        assert store.read_tracks(sid) == [track.to_json()]

    def test_timeline_cache_bit_identical(self, store):
        sid = store.create_session("en")
        blob = b'{"tick":0}\n{"tick":1}\n'
        store.timeline_cache_put(sid, "abcd", blob)
        assert store.timeline_cache_get(sid, "abcd") == blob
        assert store.timeline_cache_get(sid, "ffff") is None

    def test_recover_marks_interrupted_failed(self, store):
        crashed = store.create_session("en")
        store.update_meta(crashed, status=SessionStatus.PROCESSING.value)
        finished = store.create_session("zh")
        store.update_meta(finished, status=SessionStatus.DONE.value)
        recovered = SessionStore(store.root).recover_incomplete()
        assert recovered == [crashed]
        assert store.read_meta(crashed)["status"] == "failed"
        assert store.read_meta(finished)["status"] == "done"

    def test_atomic_meta_write_leaves_no_temp_files(self, store):
        sid = store.create_session("en")
        for i in range(20):
            store.update_stage(sid, "visual", i / 20)
        leftovers = [
            name
            for name in os.listdir(store.session_dir(sid))
            if name.startswith("meta.json.tmp")
        ]
        assert leftovers == []


class TestPrivacyScan:
    def _completed_session(self, store):
        sid = store.create_session("en")
        store.append_observations(
            sid, [joy_obs(ModalityTag.AUDIO, 0.0, 1.0, joy=0.5)]
        )
        track = PersonTrack(person_id=0)
        track.boxes.append((0.0, (1.0, 2.0, 3.0, 4.0)))
        store.write_tracks(sid, [track])
        store.timeline_cache_put(sid, "d" * 16, b'{"tick":0}\n')
        store.drop_work_dir(sid)
        store.update_meta(sid, status=SessionStatus.DONE.value)
        return sid

    def test_clean_store_passes(self, store):
        self._completed_session(store)
        assert scan_store(store.root) == []

    def test_detects_media_magic(self, store):
        sid = self._completed_session(store)
        with open(os.path.join(store.session_dir(sid), "leak.json"), "wb") as fh:
            fh.write(b"RIFF\x00\x00\x00\x00AVI junk")
        violations = scan_store(store.root)
        assert any("signature" in v for v in violations)

    def test_detects_binary_blob_field(self, store):
        import base64

        sid = self._completed_session(store)
        blob = base64.b64encode(os.urandom(8192)).decode()
        path = os.path.join(store.session_dir(sid), "sneaky.json")
        with open(path, "w") as fh:
            json.dump({"pixels": blob}, fh)
        violations = scan_store(store.root)
        assert any("binary" in v for v in violations)

    def test_detects_surviving_work_dir(self, store):
        sid = self._completed_session(store)
        os.makedirs(store.work_dir(sid), exist_ok=True)
        violations = scan_store(store.root)
        assert any("work directory" in v for v in violations)

    def test_detects_non_json_artifact(self, store):
        sid = self._completed_session(store)
        with open(os.path.join(store.session_dir(sid), "frame.bin"), "wb") as fh:
            fh.write(os.urandom(64))
        violations = scan_store(store.root)
        assert any("non-JSON" in v for v in violations)
