"""Common label space, score types, time axis and session records.

Every other module exchanges data through these immutable value types,
so they are safe to share between concurrent pipeline stages. The JSON
field names and their order are part of the wire contract and must not
change.
"""

import enum
import math
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Set, Tuple

from .errors import ValidationError

__all__ = [
    "EmotionLabel",
    "EMOTION_LABELS",
    "EmotionDistribution",
    "VAPoint",
    "TimeInterval",
    "ModalityTag",
    "MODALITY_ORDER",
    "ModalityObservation",
    "SessionStatus",
    "SessionMeta",
    "clamp_distribution",
    "dominant_labels",
]


class EmotionLabel(enum.Enum):
    """The nine output emotion channels, in canonical serialization order.

    The first eight are Plutchik's basic emotions; ``NONE`` is an ordinary
    ninth channel meaning "no emotion present", not the complement of the
    other eight.
    """

    JOY = "joy"
    TRUST = "trust"
    FEAR = "fear"
    SURPRISE = "surprise"
    SADNESS = "sadness"
    ANTICIPATION = "anticipation"
    ANGER = "anger"
    DISGUST = "disgust"
    NONE = "none"

    @property
    def index(self) -> int:
        return _LABEL_INDEX[self]


EMOTION_LABELS: Tuple[EmotionLabel, ...] = tuple(EmotionLabel)
_LABEL_INDEX = {label: i for i, label in enumerate(EMOTION_LABELS)}
EMOTION_NAMES: Tuple[str, ...] = tuple(label.value for label in EMOTION_LABELS)


class ModalityTag(enum.Enum):
    """The three signal channels."""

    VISUAL = "visual"
    AUDIO = "audio"
    LINGUISTIC = "linguistic"


MODALITY_ORDER: Tuple[ModalityTag, ...] = (
    ModalityTag.VISUAL,
    ModalityTag.AUDIO,
    ModalityTag.LINGUISTIC,
)
_MODALITY_RANK = {tag: i for i, tag in enumerate(MODALITY_ORDER)}


def modality_sort_key(tag: ModalityTag) -> int:
    """Canonical ordering (visual, audio, linguistic) for serialized sets."""
    return _MODALITY_RANK[tag]


@dataclass(frozen=True)
class EmotionDistribution:
    """Nine independent scores in [0,1], one per emotion channel.

    Multilabel: there is no sum-to-one constraint, several channels may
    be active at once.
    """

    scores: Tuple[float, ...]

    def __post_init__(self):
        if len(self.scores) != len(EMOTION_LABELS):
            raise ValidationError(
                f"expected {len(EMOTION_LABELS)} scores, got {len(self.scores)}"
            )
        for i, s in enumerate(self.scores):
            if not math.isfinite(s):
                raise ValidationError(f"score[{i}] ({EMOTION_NAMES[i]}) is not finite")
            if not 0.0 <= s <= 1.0:
                raise ValidationError(
                    f"score[{i}] ({EMOTION_NAMES[i]}) = {s} outside [0,1]"
                )

    def __getitem__(self, label: EmotionLabel) -> float:
        return self.scores[label.index]

    def to_json(self) -> Dict[str, float]:
        """Serialize with the fixed field order joy..none."""
        return {name: float(s) for name, s in zip(EMOTION_NAMES, self.scores)}

    @classmethod
    def from_json(cls, data: Dict[str, float]) -> "EmotionDistribution":
        try:
            return cls(tuple(float(data[name]) for name in EMOTION_NAMES))
        except KeyError as exc:
            raise ValidationError(f"missing emotion field {exc}") from exc

    @classmethod
    def zeros(cls) -> "EmotionDistribution":
        return cls((0.0,) * len(EMOTION_LABELS))

    @classmethod
    def none_only(cls) -> "EmotionDistribution":
        """All-zero distribution except the `none` channel at 1."""
        scores = [0.0] * len(EMOTION_LABELS)
        scores[EmotionLabel.NONE.index] = 1.0
        return cls(tuple(scores))


@dataclass(frozen=True)
class VAPoint:
    """Continuous valence and arousal, each clamped to [-1,1]."""

    valence: float
    arousal: float

    def __post_init__(self):
        for name, v in (("valence", self.valence), ("arousal", self.arousal)):
            if not math.isfinite(v):
                raise ValidationError(f"{name} is not finite")
        # Clamp at every construction site rather than reject: upstream
        # model heads may overshoot slightly.
        object.__setattr__(self, "valence", min(max(self.valence, -1.0), 1.0))
        object.__setattr__(self, "arousal", min(max(self.arousal, -1.0), 1.0))

    def to_json(self) -> Dict[str, float]:
        return {"valence": float(self.valence), "arousal": float(self.arousal)}

    @classmethod
    def from_json(cls, data: Dict[str, float]) -> "VAPoint":
        try:
            return cls(float(data["valence"]), float(data["arousal"]))
        except KeyError as exc:
            raise ValidationError(f"missing VA field {exc}") from exc


@dataclass(frozen=True)
class TimeInterval:
    """Half-open time interval [start_s, end_s) in media seconds."""

    start_s: float
    end_s: float

    def __post_init__(self):
        if not (math.isfinite(self.start_s) and math.isfinite(self.end_s)):
            raise ValidationError("interval bounds must be finite")
        if self.start_s < 0:
            raise ValidationError(f"start_s {self.start_s} < 0")
        if self.end_s <= self.start_s:
            raise ValidationError(
                f"end_s {self.end_s} must be > start_s {self.start_s}"
            )

    @property
    def duration_s(self) -> float:
        return self.end_s - self.start_s

    def contains(self, t: float) -> bool:
        return self.start_s <= t < self.end_s

    def to_json(self) -> Dict[str, float]:
        return {"start_s": float(self.start_s), "end_s": float(self.end_s)}


@dataclass(frozen=True)
class ModalityObservation:
    """One backend output mapped to the common label space.

    ``person_id`` is present exactly when the modality is visual: audio
    and linguistic scores are group-level (no speaker diarization).
    """

    modality: ModalityTag
    interval: TimeInterval
    person_id: Optional[int]
    emotions: EmotionDistribution
    va: VAPoint
    confidence: float

    def __post_init__(self):
        if (self.person_id is not None) != (self.modality is ModalityTag.VISUAL):
            raise ValidationError(
                "person_id must be present exactly for visual observations"
            )
        if self.person_id is not None and self.person_id < 0:
            raise ValidationError("person_id must be non-negative")
        if not (math.isfinite(self.confidence) and 0.0 <= self.confidence <= 1.0):
            raise ValidationError(f"confidence {self.confidence} outside [0,1]")

    def to_json(self) -> Dict:
        return {
            "modality": self.modality.value,
            "start_s": float(self.interval.start_s),
            "end_s": float(self.interval.end_s),
            "person_id": self.person_id,
            "emotions": self.emotions.to_json(),
            "va": self.va.to_json(),
            "confidence": float(self.confidence),
        }

    @classmethod
    def from_json(cls, data: Dict) -> "ModalityObservation":
        return cls(
            modality=ModalityTag(data["modality"]),
            interval=TimeInterval(float(data["start_s"]), float(data["end_s"])),
            person_id=data.get("person_id"),
            emotions=EmotionDistribution.from_json(data["emotions"]),
            va=VAPoint.from_json(data["va"]),
            confidence=float(data["confidence"]),
        )


class SessionStatus(enum.Enum):
    QUEUED = "queued"
    PROCESSING = "processing"
    DONE = "done"
    FAILED = "failed"


SUPPORTED_LANGUAGES = ("en", "zh")


@dataclass(frozen=True)
class SessionMeta:
    """Session-level record persisted as meta.json."""

    session_id: str
    duration_s: float
    fps: float
    language: str
    status: SessionStatus
    created_at: str  # ISO 8601

    def __post_init__(self):
        if self.language not in SUPPORTED_LANGUAGES:
            raise ValidationError(
                f"language {self.language!r} not in {SUPPORTED_LANGUAGES}"
            )
        if self.duration_s <= 0:
            raise ValidationError("duration_s must be > 0")
        if self.fps <= 0:
            raise ValidationError("fps must be > 0")

    def to_json(self) -> Dict:
        return {
            "session_id": self.session_id,
            "duration_s": float(self.duration_s),
            "fps": float(self.fps),
            "language": self.language,
            "status": self.status.value,
            "created_at": self.created_at,
        }

    @classmethod
    def from_json(cls, data: Dict) -> "SessionMeta":
        return cls(
            session_id=data["session_id"],
            duration_s=float(data["duration_s"]),
            fps=float(data["fps"]),
            language=data["language"],
            status=SessionStatus(data["status"]),
            created_at=data["created_at"],
        )


def clamp_distribution(raw: Sequence[float]) -> EmotionDistribution:
    """Clamp a raw 9-vector elementwise into [0,1], preserving order.

    Raises ValidationError naming the offending index for non-finite
    entries or wrong arity. Idempotent on valid input.
    """
    if len(raw) != len(EMOTION_LABELS):
        raise ValidationError(
            f"expected {len(EMOTION_LABELS)} scores, got {len(raw)}"
        )
    clamped: List[float] = []
    for i, value in enumerate(raw):
        v = float(value)
        if not math.isfinite(v):
            raise ValidationError(f"score[{i}] ({EMOTION_NAMES[i]}) is not finite")
        clamped.append(min(max(v, 0.0), 1.0))
    return EmotionDistribution(tuple(clamped))


def dominant_labels(
    dist: EmotionDistribution, threshold: float = 0.5, strict: bool = True
) -> Set[EmotionLabel]:
    """Labels scoring at or above ``threshold``.

    May be empty. With ``strict=False`` an empty result falls back to the
    single argmax label, ties broken by lowest canonical index.
    """
    if not 0.0 < threshold < 1.0:
        raise ValidationError(f"threshold {threshold} outside (0,1)")
    active = {
        label for label, s in zip(EMOTION_LABELS, dist.scores) if s >= threshold
    }
    if not active and not strict:
        best = max(range(len(dist.scores)), key=lambda i: (dist.scores[i], -i))
        active = {EMOTION_LABELS[best]}
    return active
