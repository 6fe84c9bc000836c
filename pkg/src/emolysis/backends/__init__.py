"""Uniform inference interface for the three modalities.

A backend turns raw modality input (face crop, audio window, transcript
segment) into scores in its own native label space plus a valence/
arousal estimate; the pipeline maps those through the label-map
registry. Backends are plugins resolved by (modality, name) from
config; the shipped `reference` backends are deterministic content-hash
stand-ins that make the whole pipeline testable without any pretrained
model. Adapters wrapping real models register through the same
interface.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Protocol, Tuple

import numpy as np

from ..errors import RegistryError, ValidationError
from ..media.ingest import AudioClip
from ..model import SUPPORTED_LANGUAGES, ModalityTag, TimeInterval


@dataclass(frozen=True)
class BackendDescriptor:
    """Identity and label-space contract of one backend."""

    name: str
    modality: ModalityTag
    native_label_space: str
    version: str
    languages: Optional[frozenset] = None
    va_convention: str = "unit"
    max_concurrent_requests: Optional[int] = None  # None = unlimited

    def to_json(self) -> Dict:
        return {
            "name": self.name,
            "modality": self.modality.value,
            "native_label_space": self.native_label_space,
            "version": self.version,
            "languages": sorted(self.languages) if self.languages else None,
            "va_convention": self.va_convention,
        }


@dataclass(frozen=True)
class TranscriptSegment:
    """One transcribed utterance."""

    interval: TimeInterval
    text: str
    language: str

    def __post_init__(self):
        if not self.text.strip():
            raise ValidationError("transcript text is empty")
        if self.language not in SUPPORTED_LANGUAGES:
            raise ValidationError(
                f"language {self.language!r} not in {SUPPORTED_LANGUAGES}"
            )


# Native-space score vector, (valence, arousal) in the backend's own
# convention (mapped to [-1,1] by the label-map registry), confidence.
InferenceResult = Tuple[np.ndarray, Tuple[float, float], float]


class VisualBackend(Protocol):
    descriptor: BackendDescriptor

    def infer_visual(self, crop: np.ndarray) -> InferenceResult: ...


class AudioBackend(Protocol):
    descriptor: BackendDescriptor

    def infer_audio(self, clip: AudioClip) -> InferenceResult: ...


class LinguisticBackend(Protocol):
    descriptor: BackendDescriptor

    def transcribe(self, clip: AudioClip, language: str) -> List[TranscriptSegment]: ...

    def infer_text(self, segment: TranscriptSegment) -> InferenceResult: ...


_FACTORIES: Dict[Tuple[ModalityTag, str], Callable[[], object]] = {}


def register_backend(
    modality: ModalityTag, name: str, factory: Callable[[], object]
) -> None:
    key = (modality, name)
    if key in _FACTORIES:
        raise RegistryError(f"backend {name!r} already registered for {modality.value}")
    _FACTORIES[key] = factory


def create_backend(modality: ModalityTag, name: str):
    try:
        factory = _FACTORIES[(modality, name)]
    except KeyError:
        raise RegistryError(
            f"no backend named {name!r} for modality {modality.value}"
        ) from None
    return factory()


def available_backends() -> List[BackendDescriptor]:
    """Descriptors of every registered backend, in registration order."""
    return [factory().descriptor for factory in _FACTORIES.values()]


def check_result(
    result: InferenceResult, descriptor: BackendDescriptor, arity: int
) -> InferenceResult:
    """Validate a backend output against its descriptor contract."""
    scores, va, confidence = result
    scores = np.asarray(scores, dtype=np.float64)
    if scores.shape != (arity,):
        raise ValidationError(
            f"backend {descriptor.name!r} emitted {scores.shape}, expected ({arity},)"
        )
    if not np.isfinite(scores).all():
        raise ValidationError(f"backend {descriptor.name!r} emitted non-finite scores")
    if not all(math.isfinite(v) for v in va):
        raise ValidationError(f"backend {descriptor.name!r} emitted non-finite VA")
    if not (math.isfinite(confidence) and 0.0 <= confidence <= 1.0):
        raise ValidationError(
            f"backend {descriptor.name!r} confidence {confidence} outside [0,1]"
        )
    return scores, va, confidence


from . import reference as _reference  # noqa: E402  (registers the defaults)

register_backend(ModalityTag.VISUAL, "reference", _reference.ReferenceVisualBackend)
register_backend(ModalityTag.AUDIO, "reference", _reference.ReferenceAudioBackend)
register_backend(
    ModalityTag.LINGUISTIC, "reference", _reference.ReferenceLinguisticBackend
)
