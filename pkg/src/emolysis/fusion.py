"""Resampling onto the tick grid and person/group fusion.

All modality observations are resampled onto a common fixed-rate tick
grid: a tick's value for a modality is the uniform average of every
observation of that modality whose interval contains the tick midpoint
(which realizes the uniform blending of overlapping audio windows).

Per-person series are visual-only: audio and transcript scores are
group-level because no speaker diarization is performed, so attributing
them to a tracked face would be fabricated. The group series fuses the
mean over selected, visible persons' visual values with the group-wide
audio and linguistic channels; channels absent at a tick are excluded
from the mean rather than zero-filled (zero-filling would bias the
group toward "no emotion").

Fusion is a pure read over immutable observations: recomputing with a
different selection never touches stored data.
"""

import hashlib
import json
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels
from .errors import ValidationError
from .model import (
    MODALITY_ORDER,
    EmotionDistribution,
    ModalityObservation,
    ModalityTag,
    VAPoint,
    clamp_distribution,
    modality_sort_key,
)
from .windowing import TickGrid

DEFAULT_WEIGHTS: Dict[ModalityTag, float] = {tag: 1.0 for tag in MODALITY_ORDER}

_DIM = 11  # 9 emotion channels + valence + arousal


@dataclass(frozen=True)
class Selection:
    """User-chosen person and modality subsets.

    An empty person set means "all persons"; the modality set must be
    non-empty.
    """

    persons: FrozenSet[int] = frozenset()
    modalities: FrozenSet[ModalityTag] = frozenset(MODALITY_ORDER)

    def __post_init__(self):
        if not self.modalities:
            raise ValidationError("selection needs at least one modality")

    def canonical(self) -> Dict:
        """Canonical JSON form; the digest of this keys timeline caches."""
        return {
            "modalities": [
                tag.value
                for tag in sorted(self.modalities, key=modality_sort_key)
            ],
            "persons": sorted(self.persons),
        }

    def digest(self) -> str:
        blob = json.dumps(self.canonical(), separators=(",", ":"), sort_keys=True)
        return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass(frozen=True)
class PersonTickValue:
    emotions: EmotionDistribution
    va: VAPoint
    present: bool


@dataclass(frozen=True)
class TickRecord:
    """One fused record per tick."""

    tick: int
    t: float
    group_emotions: EmotionDistribution
    group_va: VAPoint
    group_modalities: Tuple[ModalityTag, ...]
    persons: Dict[int, PersonTickValue] = field(default_factory=dict)

    def to_json(self) -> Dict:
        return {
            "tick": self.tick,
            "t": float(self.t),
            "group": {
                "emotions": self.group_emotions.to_json(),
                "va": self.group_va.to_json(),
                "modalities": [m.value for m in self.group_modalities],
            },
            "persons": {
                str(pid): {
                    "emotions": value.emotions.to_json(),
                    "va": value.va.to_json(),
                    "present": value.present,
                }
                for pid, value in sorted(self.persons.items())
            },
        }


@dataclass
class _Channel:
    """Resampled per-tick values for one modality stream."""

    means: np.ndarray  # (ticks, 11)
    present: np.ndarray  # (ticks,) bool


def _resample_group(
    observations: Sequence[ModalityObservation], grid: TickGrid
) -> Optional[_Channel]:
    if not observations:
        return None
    starts = np.array([o.interval.start_s for o in observations], dtype=np.float64)
    ends = np.array([o.interval.end_s for o in observations], dtype=np.float64)
    values = np.array(
        [
            list(o.emotions.scores) + [o.va.valence, o.va.arousal]
            for o in observations
        ],
        dtype=np.float64,
    )
    sums, counts = _kernels.accumulate_ticks(
        starts, ends, values, grid.tick_s, grid.ticks
    )
    present = counts > 0
    means = np.zeros_like(sums)
    np.divide(sums, counts[:, None], out=means, where=present[:, None])
    return _Channel(means=means, present=present)


class Resampled:
    """All observation streams of a session resampled onto one grid."""

    def __init__(
        self, observations: Sequence[ModalityObservation], grid: TickGrid
    ):
        self.grid = grid
        visual = [o for o in observations if o.modality is ModalityTag.VISUAL]
        person_ids = sorted({o.person_id for o in visual})
        self.person_visual: Dict[int, _Channel] = {}
        for pid in person_ids:
            channel = _resample_group(
                [o for o in visual if o.person_id == pid], grid
            )
            if channel is not None:
                self.person_visual[pid] = channel
        self.audio = _resample_group(
            [o for o in observations if o.modality is ModalityTag.AUDIO], grid
        )
        self.linguistic = _resample_group(
            [o for o in observations if o.modality is ModalityTag.LINGUISTIC], grid
        )


def resample(
    observations: Sequence[ModalityObservation], grid: TickGrid
) -> Resampled:
    """Resample observations onto the grid (see module docstring)."""
    return Resampled(observations, grid)


def _unpack(row: np.ndarray) -> Tuple[EmotionDistribution, VAPoint]:
    # clamp_distribution absorbs 1-ulp overshoot from float accumulation;
    # VAPoint clamps by construction.
    return (
        clamp_distribution([float(v) for v in row[:9]]),
        VAPoint(float(row[9]), float(row[10])),
    )


_ABSENT_PERSON = PersonTickValue(
    emotions=EmotionDistribution.zeros(), va=VAPoint(0.0, 0.0), present=False
)


class SessionFusion:
    """Fusion engine for one session's immutable observation set."""

    def __init__(
        self,
        observations: Sequence[ModalityObservation],
        person_ids: Sequence[int],
        grid: TickGrid,
        weights: Optional[Dict[ModalityTag, float]] = None,
    ):
        self.person_ids = sorted(person_ids)
        self.grid = grid
        self.weights = dict(DEFAULT_WEIGHTS if weights is None else weights)
        self.resampled = resample(observations, grid)

    # -- selection handling ------------------------------------------------

    def validate_selection(self, selection: Selection) -> None:
        unknown = sorted(set(selection.persons) - set(self.person_ids))
        if unknown:
            raise ValidationError(f"unknown person ids: {unknown}")

    def _selected_persons(self, selection: Selection) -> List[int]:
        if not selection.persons:
            return list(self.person_ids)
        return sorted(selection.persons)

    # -- fusion ------------------------------------------------------------

    def fuse_person(
        self, tick: int, person_id: int, selection: Selection
    ) -> Optional[Tuple[EmotionDistribution, VAPoint]]:
        """The person's resampled visual value, or None when not visible."""
        if ModalityTag.VISUAL not in selection.modalities:
            raise ValidationError("per-person fusion requires the visual modality")
        if person_id not in self.person_ids:
            raise ValidationError(f"unknown person ids: [{person_id}]")
        channel = self.resampled.person_visual.get(person_id)
        if channel is None or not channel.present[tick]:
            return None
        return _unpack(channel.means[tick])

    def _group_channels(
        self, tick: int, selection: Selection
    ) -> List[Tuple[ModalityTag, np.ndarray]]:
        channels: List[Tuple[ModalityTag, np.ndarray]] = []
        if ModalityTag.VISUAL in selection.modalities:
            rows = [
                self.resampled.person_visual[pid].means[tick]
                for pid in self._selected_persons(selection)
                if pid in self.resampled.person_visual
                and self.resampled.person_visual[pid].present[tick]
            ]
            if rows:
                channels.append(
                    (ModalityTag.VISUAL, np.sum(rows, axis=0) / len(rows))
                )
        for tag, channel in (
            (ModalityTag.AUDIO, self.resampled.audio),
            (ModalityTag.LINGUISTIC, self.resampled.linguistic),
        ):
            if (
                tag in selection.modalities
                and channel is not None
                and channel.present[tick]
            ):
                channels.append((tag, channel.means[tick]))
        return channels

    def fuse_group(
        self, tick: int, selection: Selection
    ) -> Tuple[EmotionDistribution, VAPoint, Tuple[ModalityTag, ...]]:
        """Weighted mean over the selected channels present at this tick.

        With nothing contributing, falls back to the defined empty record:
        all-zero distribution with none=1 and VA (0,0).
        """
        channels = self._group_channels(tick, selection)
        if not channels:
            return EmotionDistribution.none_only(), VAPoint(0.0, 0.0), ()
        total_weight = 0.0
        acc = np.zeros(_DIM, dtype=np.float64)
        for tag, row in channels:
            w = self.weights.get(tag, 1.0)
            acc += w * row
            total_weight += w
        emotions, va = _unpack(acc / total_weight)
        tags = tuple(
            sorted((tag for tag, _ in channels), key=modality_sort_key)
        )
        return emotions, va, tags

    def build_timeline(self, selection: Selection) -> List[TickRecord]:
        """One fused record per tick, deterministic for fixed inputs."""
        self.validate_selection(selection)
        include_persons = ModalityTag.VISUAL in selection.modalities
        selected = self._selected_persons(selection) if include_persons else []
        records: List[TickRecord] = []
        for tick in range(self.grid.ticks):
            emotions, va, tags = self.fuse_group(tick, selection)
            persons: Dict[int, PersonTickValue] = {}
            for pid in selected:
                value = self.fuse_person(tick, pid, selection)
                if value is None:
                    persons[pid] = _ABSENT_PERSON
                else:
                    persons[pid] = PersonTickValue(
                        emotions=value[0], va=value[1], present=True
                    )
            records.append(
                TickRecord(
                    tick=tick,
                    t=self.grid.tick_start(tick),
                    group_emotions=emotions,
                    group_va=va,
                    group_modalities=tags,
                    persons=persons,
                )
            )
        return records


def tick_record_to_json_line(record: TickRecord) -> str:
    """Canonical single-line serialization shared by CLI, cache and API."""
    return json.dumps(record.to_json(), separators=(",", ":"))
