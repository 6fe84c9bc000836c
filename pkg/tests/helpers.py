"""Shared test utilities: observation builders and the independent
brute-force fusion oracle used by both the unit and acceptance suites.

The oracle recomputes fused values straight from the observation list
with plain Python arithmetic; it never touches the tick-accumulation
kernels, so agreement is meaningful.
"""

from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from emolysis.model import (
    EmotionDistribution,
    ModalityObservation,
    ModalityTag,
    TimeInterval,
    VAPoint,
)

NONE_INDEX = 8


def make_obs(
    modality: ModalityTag,
    start: float,
    end: float,
    scores: Sequence[float],
    person: Optional[int] = None,
    va: Tuple[float, float] = (0.0, 0.0),
) -> ModalityObservation:
    return ModalityObservation(
        modality=modality,
        interval=TimeInterval(start, end),
        person_id=person,
        emotions=EmotionDistribution(tuple(float(s) for s in scores)),
        va=VAPoint(*va),
        confidence=1.0,
    )


def joy_obs(modality, start, end, joy, person=None, va=(0.0, 0.0)):
    scores = [0.0] * 9
    scores[0] = joy
    return make_obs(modality, start, end, scores, person, va)


def _row(obs: ModalityObservation) -> List[float]:
    return list(obs.emotions.scores) + [obs.va.valence, obs.va.arousal]


def _mean(rows: List[List[float]]) -> List[float]:
    n = len(rows)
    return [sum(row[i] for row in rows) / n for i in range(11)]


def brute_force_group(
    observations: Sequence[ModalityObservation],
    tick: int,
    tick_s: float,
    persons: frozenset,
    modalities: frozenset,
) -> Optional[List[float]]:
    """Equal-weight group fusion recomputed directly from observations.

    Returns the 11-vector (9 emotions + VA) or None when nothing
    contributes at this tick.
    """
    mid = (tick + 0.5) * tick_s
    channels: List[List[float]] = []

    if ModalityTag.VISUAL in modalities:
        visible: Dict[int, List[List[float]]] = {}
        for obs in observations:
            if obs.modality is not ModalityTag.VISUAL:
                continue
            if persons and obs.person_id not in persons:
                continue
            if obs.interval.contains(mid):
                visible.setdefault(obs.person_id, []).append(_row(obs))
        if visible:
            person_means = [_mean(rows) for _, rows in sorted(visible.items())]
            channels.append(_mean(person_means))

    for tag in (ModalityTag.AUDIO, ModalityTag.LINGUISTIC):
        if tag not in modalities:
            continue
        rows = [
            _row(obs)
            for obs in observations
            if obs.modality is tag and obs.interval.contains(mid)
        ]
        if rows:
            channels.append(_mean(rows))

    if not channels:
        return None
    return _mean(channels)


def random_observation_set(rng: np.random.Generator):
    """A small synthetic session: random persons, windows and scores."""
    duration = float(rng.uniform(2.0, 12.0))
    n_persons = int(rng.integers(1, 5))
    observations: List[ModalityObservation] = []
    for person in range(n_persons):
        for _ in range(int(rng.integers(1, 6))):
            start = float(rng.uniform(0.0, duration * 0.9))
            end = float(min(start + rng.uniform(0.05, 3.0), duration))
            if end <= start:
                continue
            observations.append(
                make_obs(
                    ModalityTag.VISUAL, start, end,
                    rng.uniform(0, 1, 9), person,
                    va=tuple(rng.uniform(-1, 1, 2)),
                )
            )
    for tag in (ModalityTag.AUDIO, ModalityTag.LINGUISTIC):
        for _ in range(int(rng.integers(0, 4))):
            start = float(rng.uniform(0.0, duration * 0.9))
            end = float(min(start + rng.uniform(0.5, 6.0), duration))
            if end <= start:
                continue
            observations.append(
                make_obs(
                    tag, start, end, rng.uniform(0, 1, 9), None,
                    va=tuple(rng.uniform(-1, 1, 2)),
                )
            )
    person_ids = sorted({
        o.person_id for o in observations if o.person_id is not None
    })
    return duration, person_ids, observations
