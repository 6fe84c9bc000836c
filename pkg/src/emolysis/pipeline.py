"""End-to-end analysis of one video into tracks and observations.

Stage order: ingest (probe) -> visual (detect, track, crop, infer per
frame) -> audio (sliding windows) -> linguistic (transcribe + score per
window) -> fuse. Each stage reports monotone progress through an
optional callback. Missing audio downgrades the session to visual-only
analysis instead of failing it; individual backend failures drop the
affected observation only.

Pixel and sample buffers never outlive the segment being processed:
the result holds only metadata, boxes and scores.
"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

from .backends import (
    AudioBackend,
    LinguisticBackend,
    VisualBackend,
    check_result,
    create_backend,
)
from .config import AnalysisConfig
from .errors import BackendError, ModalityUnavailable, ValidationError
from .labelmap import LabelMapRegistry, default_registry, load_registry
from .media.ingest import MediaInfo, audio, frames, open_media, probe
from .model import (
    MODALITY_ORDER,
    ModalityObservation,
    ModalityTag,
    TimeInterval,
)
from .tracking import (
    MarkerDetector,
    PersonTrack,
    Tracker,
    crop_face,
)
from .windowing import TickGrid, plan_windows

log = logging.getLogger(__name__)

ProgressFn = Callable[[str, float, str], None]

STAGES = ("ingest", "visual", "audio", "linguistic", "fuse")

_DETECTORS: Dict[str, Callable[[], object]] = {"marker": MarkerDetector}


def register_detector(name: str, factory: Callable[[], object]) -> None:
    _DETECTORS[name] = factory


def create_detector(name: str):
    try:
        return _DETECTORS[name]()
    except KeyError:
        raise ValidationError(f"unknown detector {name!r}") from None


@dataclass
class PipelineResult:
    """Everything a session persists: metadata, tracks and scores."""

    info: MediaInfo
    language: str
    config: AnalysisConfig
    tracks: List[PersonTrack] = field(default_factory=list)
    observations: List[ModalityObservation] = field(default_factory=list)
    modalities_present: List[str] = field(default_factory=list)

    @property
    def grid(self) -> TickGrid:
        return TickGrid.for_duration(self.info.duration_s, self.config.tick_s)

    @property
    def person_ids(self) -> List[int]:
        return sorted(track.person_id for track in self.tracks)


def _noop_progress(stage: str, fraction: float, message: str = "") -> None:
    pass


def _backend_name(config: AnalysisConfig, tag: ModalityTag) -> Optional[str]:
    """Configured plugin name, or None when the modality is disabled."""
    name = config.backends.get(tag.value)
    if name in (None, "", "none"):
        return None
    return name


def run_pipeline(
    path: str,
    language: str,
    config: Optional[AnalysisConfig] = None,
    registry: Optional[LabelMapRegistry] = None,
    progress: Optional[ProgressFn] = None,
) -> PipelineResult:
    """Run the full analysis pipeline on one video file."""
    config = config or AnalysisConfig()
    emit = progress or _noop_progress
    if registry is None:
        registry = (
            load_registry(config.label_maps_path)
            if config.label_maps_path
            else default_registry()
        )

    info = probe(path)
    emit("ingest", 1.0, f"{info.frame_count} frames @ {info.fps:g} fps")
    result = PipelineResult(info=info, language=language, config=config)

    _run_visual(path, result, registry, emit)
    clips_present = _run_audio(path, result, registry, emit)
    _run_linguistic(path, result, registry, emit, clips_present)
    emit("fuse", 0.0, "")
    # Resampling happens lazily in SessionFusion; the stage exists so
    # consumers (service cache warmup, CLI) can report it.
    present = {o.modality for o in result.observations}
    result.modalities_present = [t.value for t in MODALITY_ORDER if t in present]
    emit("fuse", 1.0, "")
    return result


def _run_visual(
    path: str,
    result: PipelineResult,
    registry: LabelMapRegistry,
    emit: ProgressFn,
) -> None:
    config = result.config
    info = result.info
    name = _backend_name(config, ModalityTag.VISUAL)
    if name is None:
        emit("visual", 1.0, "skipped: no visual backend configured")
        return
    backend: VisualBackend = create_backend(ModalityTag.VISUAL, name)
    descriptor = backend.descriptor
    arity = registry.space(descriptor.native_label_space).arity
    detector = create_detector(config.detector)
    tracker = Tracker(iou_threshold=config.iou_threshold, ttl_s=config.track_ttl_s)
    stride = config.visual_stride_frames

    emit("visual", 0.0, "")
    media = open_media(path)
    try:
        span = TimeInterval(0.0, info.duration_s)
        processed = 0
        total = max(1, (info.frame_count + stride - 1) // stride)
        for frame in frames(path, span, backend=media):
            if frame.frame_index % stride:
                continue
            processed += 1
            try:
                detections = detector.detect(frame)
            except Exception as exc:  # detector plugins may fail per frame
                log.warning("detector failed on frame %d: %s", frame.frame_index, exc)
                continue
            assignment = tracker.associate(detections, frame.timestamp_s)
            interval = TimeInterval(
                frame.timestamp_s,
                min((frame.frame_index + stride) / info.fps, info.duration_s),
            )
            for di, detection in enumerate(detections):
                crop = crop_face(frame, detection.bbox)
                if crop is None:
                    continue
                try:
                    scores, va, confidence = check_result(
                        backend.infer_visual(crop), descriptor, arity
                    )
                except (BackendError, ValidationError) as exc:
                    log.warning(
                        "visual backend failed at frame %d: %s", frame.frame_index, exc
                    )
                    continue
                result.observations.append(
                    ModalityObservation(
                        modality=ModalityTag.VISUAL,
                        interval=interval,
                        person_id=assignment[di],
                        emotions=registry.map_scores(
                            scores, descriptor.native_label_space
                        ),
                        va=registry.map_va(va, descriptor.va_convention),
                        confidence=confidence,
                    )
                )
            if processed % 50 == 0:
                emit("visual", processed / total, "")
    finally:
        media.close()
    result.tracks = sorted(tracker.tracks, key=lambda tr: tr.person_id)
    emit("visual", 1.0, f"{len(result.tracks)} persons tracked")


def _run_audio(
    path: str,
    result: PipelineResult,
    registry: LabelMapRegistry,
    emit: ProgressFn,
) -> bool:
    """Returns False when the container has no audio stream."""
    config = result.config
    name = _backend_name(config, ModalityTag.AUDIO)
    if name is None:
        emit("audio", 1.0, "skipped: no audio backend configured")
        return True  # the stream may still exist for the linguistic path
    backend: AudioBackend = create_backend(ModalityTag.AUDIO, name)
    descriptor = backend.descriptor
    arity = registry.space(descriptor.native_label_space).arity
    plan = plan_windows(result.info.duration_s, config.window_s, config.stride_s)

    emit("audio", 0.0, "")
    for i, window in enumerate(plan.windows):
        try:
            clip = audio(path, window, config.audio_rate_hz)
        except ModalityUnavailable:
            emit("audio", 1.0, "no audio stream; skipping audio and linguistic")
            return False
        try:
            scores, va, confidence = check_result(
                backend.infer_audio(clip), descriptor, arity
            )
        except (BackendError, ValidationError) as exc:
            log.warning("audio backend failed on window %d: %s", i, exc)
            continue
        result.observations.append(
            ModalityObservation(
                modality=ModalityTag.AUDIO,
                interval=clip.interval,
                person_id=None,
                emotions=registry.map_scores(scores, descriptor.native_label_space),
                va=registry.map_va(va, descriptor.va_convention),
                confidence=confidence,
            )
        )
        emit("audio", (i + 1) / len(plan.windows), "")
    emit("audio", 1.0, "")
    return True


def _run_linguistic(
    path: str,
    result: PipelineResult,
    registry: LabelMapRegistry,
    emit: ProgressFn,
    has_audio: bool,
) -> None:
    config = result.config
    if not has_audio:
        emit("linguistic", 1.0, "skipped: no audio stream")
        return
    name = _backend_name(config, ModalityTag.LINGUISTIC)
    if name is None:
        emit("linguistic", 1.0, "skipped: no linguistic backend configured")
        return
    backend: LinguisticBackend = create_backend(ModalityTag.LINGUISTIC, name)
    descriptor = backend.descriptor
    if descriptor.languages and result.language not in descriptor.languages:
        emit(
            "linguistic",
            1.0,
            f"skipped: backend does not support {result.language!r}",
        )
        return
    arity = registry.space(descriptor.native_label_space).arity
    plan = plan_windows(result.info.duration_s, config.window_s, config.stride_s)

    emit("linguistic", 0.0, "")
    for i, window in enumerate(plan.windows):
        try:
            clip = audio(path, window, config.audio_rate_hz)
            segments = backend.transcribe(clip, result.language)
        except ModalityUnavailable:
            emit("linguistic", 1.0, "skipped: no audio stream")
            return
        except (BackendError, ValidationError) as exc:
            log.warning("transcription failed on window %d: %s", i, exc)
            continue
        for segment in segments:
            try:
                scores, va, confidence = check_result(
                    backend.infer_text(segment), descriptor, arity
                )
            except (BackendError, ValidationError) as exc:
                log.warning("text backend failed on window %d: %s", i, exc)
                continue
            result.observations.append(
                ModalityObservation(
                    modality=ModalityTag.LINGUISTIC,
                    interval=segment.interval,
                    person_id=None,
                    emotions=registry.map_scores(
                        scores, descriptor.native_label_space
                    ),
                    va=registry.map_va(va, descriptor.va_convention),
                    confidence=confidence,
                )
            )
        emit("linguistic", (i + 1) / len(plan.windows), "")
    emit("linguistic", 1.0, "")
