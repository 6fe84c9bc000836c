"""Deterministic reference backends driven by content hashes.

Each inference digests its input bytes to a 64-bit seed and expands the
seed into scores via splitmix64, so outputs are reproducible functions
of (input bytes, backend version) across platforms and runs. They carry
no emotional meaning whatsoever; their job is to make every downstream
component (mapping, fusion, service, UI) testable end-to-end without
model weights. Confidence is fixed at 1.0.
"""

import hashlib
from typing import List

import numpy as np

from .. import _kernels
from ..errors import ValidationError
from ..media.ingest import AudioClip
from ..model import SUPPORTED_LANGUAGES, ModalityTag
from . import BackendDescriptor, InferenceResult, TranscriptSegment

VERSION = "1"
CROP_SHAPE = (224, 224, 3)


def _seed(domain: str, payload: bytes) -> int:
    h = hashlib.blake2b(digest_size=8)
    h.update(f"emolysis:{domain}:{VERSION}:".encode())
    h.update(payload)
    return int.from_bytes(h.digest(), "little")


def _expand(seed: int, arity: int) -> InferenceResult:
    u = _kernels.splitmix_expand(seed, arity + 2)
    scores = u[:arity]
    va = (2.0 * u[arity] - 1.0, 2.0 * u[arity + 1] - 1.0)
    return scores, va, 1.0


class ReferenceVisualBackend:
    """Hash-driven stand-in for a face-expression model (affectnet8 space)."""

    descriptor = BackendDescriptor(
        name="reference",
        modality=ModalityTag.VISUAL,
        native_label_space="affectnet8",
        version=VERSION,
    )
    arity = 8

    def infer_visual(self, crop: np.ndarray) -> InferenceResult:
        if crop.shape != CROP_SHAPE or crop.dtype != np.uint8:
            raise ValidationError(
                f"crop must be uint8 {CROP_SHAPE}, got {crop.dtype} {crop.shape}"
            )
        return _expand(_seed("visual", crop.tobytes()), self.arity)


class ReferenceAudioBackend:
    """Hash-driven stand-in for a non-semantic audio model (plutchik9 space)."""

    descriptor = BackendDescriptor(
        name="reference",
        modality=ModalityTag.AUDIO,
        native_label_space="plutchik9",
        version=VERSION,
    )
    arity = 9

    def infer_audio(self, clip: AudioClip) -> InferenceResult:
        if clip.samples.size == 0:
            raise ValidationError("audio clip has no samples")
        payload = (
            clip.sample_rate_hz.to_bytes(4, "little")
            + clip.samples.astype("<i2", copy=False).tobytes()
        )
        return _expand(_seed("audio", payload), self.arity)


class ReferenceLinguisticBackend:
    """Hash-driven transcription + text scoring (mosei6 space).

    Transcription emits one synthetic utterance per non-silent clip,
    with placeholder text derived from the clip digest.
    """

    descriptor = BackendDescriptor(
        name="reference",
        modality=ModalityTag.LINGUISTIC,
        native_label_space="mosei6",
        version=VERSION,
        languages=frozenset(SUPPORTED_LANGUAGES),
    )
    arity = 6

    def transcribe(self, clip: AudioClip, language: str) -> List[TranscriptSegment]:
        if language not in SUPPORTED_LANGUAGES:
            raise ValidationError(
                f"language {language!r} not in {SUPPORTED_LANGUAGES}"
            )
        if clip.samples.size == 0 or not np.any(clip.samples):
            return []
        seed = _seed(
            f"transcribe:{language}",
            clip.samples.astype("<i2", copy=False).tobytes(),
        )
        return [
            TranscriptSegment(
                interval=clip.interval, text=f"utt-{seed:016x}", language=language
            )
        ]

    def infer_text(self, segment: TranscriptSegment) -> InferenceResult:
        if segment.language not in self.descriptor.languages:
            raise ValidationError(
                f"segment language {segment.language!r} not supported by "
                f"{self.descriptor.name!r}"
            )
        payload = segment.text.encode("utf-8")
        return _expand(_seed(f"text:{segment.language}", payload), self.arity)
