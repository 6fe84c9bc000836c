"""Demux input video into a frame stream and a mono audio stream.

Both streams share the container's clock. Pixel and sample buffers are
transient by contract: they live only while the owning segment is being
processed and are never serialized anywhere.

Two reader backends: the built-in RIFF parser for uncompressed AVI
(the test-corpus format, which also carries PCM audio), and OpenCV for
everything else it can decode (frames only; without an audio-capable
decoder those inputs degrade to visual-only analysis).
"""

import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Optional

import numpy as np

from ..errors import IngestError, ModalityUnavailable, ValidationError
from ..model import TimeInterval
from .riffavi import RawAviReader, UnsupportedCodecError

DEFAULT_AUDIO_RATE_HZ = 16000


@dataclass
class MediaInfo:
    """Probe result; the media-derived fragment of a session record."""

    duration_s: float
    fps: float
    width: int
    height: int
    frame_count: int
    has_audio: bool
    sample_rate_hz: Optional[int] = None


@dataclass
class FrameRef:
    """One decoded frame. `pixels` is a transient RGB buffer (HxWx3 uint8)."""

    frame_index: int
    timestamp_s: float
    pixels: np.ndarray


@dataclass
class AudioClip:
    """Mono int16 samples for one interval. `samples` is transient."""

    interval: TimeInterval
    sample_rate_hz: int
    samples: np.ndarray


class _Cv2Backend:
    """OpenCV-based fallback reader (no audio access on this platform)."""

    def __init__(self, path: str):
        import cv2

        self._cv2 = cv2
        self.path = path
        cap = cv2.VideoCapture(path)
        if not cap.isOpened():
            cap.release()
            raise IngestError(f"{path}: container not decodable")
        self.fps = cap.get(cv2.CAP_PROP_FPS)
        self.frame_count = int(cap.get(cv2.CAP_PROP_FRAME_COUNT))
        self.width = int(cap.get(cv2.CAP_PROP_FRAME_WIDTH))
        self.height = int(cap.get(cv2.CAP_PROP_FRAME_HEIGHT))
        cap.release()
        if self.fps <= 0 or self.frame_count <= 0:
            raise IngestError(f"{path}: no decodable video frames")
        self.has_audio = False
        self.sample_rate = None
        self.audio_sample_count = 0

    @property
    def duration_s(self) -> float:
        return self.frame_count / self.fps

    def iter_frames(self, first: int, last: int):
        cap = self._cv2.VideoCapture(self.path)
        try:
            cap.set(self._cv2.CAP_PROP_POS_FRAMES, first)
            for index in range(first, last):
                ok, bgr = cap.read()
                if not ok:
                    from ..errors import PartialSegmentError

                    raise PartialSegmentError(
                        f"{self.path}: decode failed at frame {index}", index - 1
                    )
                yield index, np.ascontiguousarray(bgr[:, :, ::-1])
        finally:
            cap.release()

    def read_audio(self, start_sample: int, end_sample: int) -> np.ndarray:
        return np.empty(0, dtype=np.int16)

    def close(self):
        pass


class _RawAviBackend:
    """Adapter exposing RawAviReader through the backend protocol."""

    def __init__(self, path: str):
        self._reader = RawAviReader(path)
        self.path = path
        self.fps = self._reader.fps
        self.frame_count = self._reader.frame_count
        self.width = self._reader.width
        self.height = self._reader.height
        self.has_audio = self._reader.has_audio
        self.sample_rate = self._reader.sample_rate
        self.audio_sample_count = self._reader.audio_sample_count

    @property
    def duration_s(self) -> float:
        return self._reader.duration_s

    def iter_frames(self, first: int, last: int):
        for index in range(first, last):
            yield index, self._reader.read_frame(index)

    def read_audio(self, start_sample: int, end_sample: int) -> np.ndarray:
        return self._reader.read_audio(start_sample, end_sample)

    def close(self):
        self._reader.close()


def _is_riff_avi(path: str) -> bool:
    try:
        with open(path, "rb") as fh:
            head = fh.read(12)
    except OSError:
        return False
    return head[:4] == b"RIFF" and head[8:12] == b"AVI "


def open_media(path: str):
    """Open a media file with the first backend that can decode it.

    RIFF AVIs go to the built-in parser (which owns the uncompressed
    format and is the only audio-capable path); compressed AVIs and
    every other container go to OpenCV.
    """
    if not os.path.isfile(path):
        raise IngestError(f"{path}: no such file")
    if _is_riff_avi(path):
        try:
            return _RawAviBackend(path)
        except UnsupportedCodecError:
            pass  # compressed AVI: let OpenCV handle it
    return _Cv2Backend(path)


def probe(path: str) -> MediaInfo:
    """Inspect a media file; deterministic for a fixed file."""
    backend = open_media(path)
    try:
        if backend.frame_count <= 0 or backend.duration_s <= 0:
            raise ValidationError(f"{path}: zero-duration media")
        return MediaInfo(
            duration_s=backend.duration_s,
            fps=backend.fps,
            width=backend.width,
            height=backend.height,
            frame_count=backend.frame_count,
            has_audio=backend.has_audio,
            sample_rate_hz=backend.sample_rate,
        )
    finally:
        backend.close()


def _frame_range(interval: TimeInterval, fps: float, frame_count: int):
    # Frame i (timestamp i/fps) belongs to [start, end) half-open.
    first = max(math.ceil(interval.start_s * fps - 1e-9), 0)
    last = min(math.ceil(interval.end_s * fps - 1e-9), frame_count)
    return first, last


def frames(
    path: str, interval: TimeInterval, backend=None
) -> Iterator[FrameRef]:
    """Stream frames whose timestamps fall inside the interval.

    Decodes one frame at a time so peak memory stays bounded by a single
    frame regardless of segment length.
    """
    owned = backend is None
    if backend is None:
        backend = open_media(path)
    try:
        if interval.start_s > backend.duration_s + 1e-9:
            raise ValidationError(
                f"interval start {interval.start_s} beyond media duration "
                f"{backend.duration_s}"
            )
        first, last = _frame_range(interval, backend.fps, backend.frame_count)
        for index, pixels in backend.iter_frames(first, last):
            yield FrameRef(
                frame_index=index,
                timestamp_s=index / backend.fps,
                pixels=pixels,
            )
    finally:
        if owned:
            backend.close()


def audio(
    path: str,
    interval: TimeInterval,
    target_rate_hz: int = DEFAULT_AUDIO_RATE_HZ,
    backend=None,
) -> AudioClip:
    """Extract mono audio for the interval, resampled to target_rate_hz.

    The requested interval is clamped to the media duration. Raises
    ModalityUnavailable when the container has no audio stream, which
    downgrades the session to visual-only analysis.
    """
    owned = backend is None
    if backend is None:
        backend = open_media(path)
    try:
        if not backend.has_audio:
            raise ModalityUnavailable(f"{path}: no audio stream")
        duration = backend.duration_s
        start = min(interval.start_s, duration)
        end = min(interval.end_s, duration)
        if end <= start:
            raise ValidationError(
                f"interval [{interval.start_s},{interval.end_s}) collapses "
                "after clamping to media duration"
            )
        clipped = TimeInterval(start, end)
        rate = backend.sample_rate
        lo = round(start * rate)
        hi = min(round(end * rate), backend.audio_sample_count)
        samples = backend.read_audio(lo, hi)
        if rate != target_rate_hz:
            samples = _resample(samples, rate, target_rate_hz)
        return AudioClip(
            interval=clipped, sample_rate_hz=target_rate_hz, samples=samples
        )
    finally:
        if owned:
            backend.close()


def _resample(samples: np.ndarray, rate: int, target: int) -> np.ndarray:
    from scipy.signal import resample_poly

    ratio = Fraction(target, rate)
    out = resample_poly(samples.astype(np.float64), ratio.numerator, ratio.denominator)
    return np.clip(np.round(out), -32768, 32767).astype(np.int16)
