"""Deterministic stream segmentation.

Two time bases live here: the 15 s / 7.5 s-stride sliding windows the
audio (and transcript) path runs on, and the fixed-rate tick grid all
modality observations are resampled onto for fusion. Everything is a
pure function of its arguments.
"""

import math
from dataclasses import dataclass
from typing import List, Tuple

from .errors import ValidationError
from .model import TimeInterval

DEFAULT_WINDOW_S = 15.0
DEFAULT_STRIDE_S = 7.5
DEFAULT_TICK_S = 0.25


@dataclass(frozen=True)
class WindowPlan:
    """Ordered sliding windows covering [0, duration_s)."""

    windows: Tuple[TimeInterval, ...]
    window_s: float
    stride_s: float
    duration_s: float


@dataclass(frozen=True)
class TickGrid:
    """Fixed-rate grid; tick k covers [k*tick_s, (k+1)*tick_s)."""

    tick_s: float
    ticks: int

    @classmethod
    def for_duration(cls, duration_s: float, tick_s: float = DEFAULT_TICK_S) -> "TickGrid":
        if duration_s <= 0:
            raise ValidationError("duration_s must be > 0")
        if tick_s <= 0:
            raise ValidationError("tick_s must be > 0")
        return cls(tick_s=tick_s, ticks=math.ceil(duration_s / tick_s))

    def tick_start(self, k: int) -> float:
        return k * self.tick_s

    def tick_midpoint(self, k: int) -> float:
        return (k + 0.5) * self.tick_s


def plan_windows(
    duration_s: float,
    window_s: float = DEFAULT_WINDOW_S,
    stride_s: float = DEFAULT_STRIDE_S,
) -> WindowPlan:
    """Plan sliding windows over [0, duration_s).

    Window k starts at k*stride_s for every k with k*stride_s + stride_s
    strictly below the duration; each end is clamped to the duration. If
    that rule yields nothing (short clips), a single window spanning the
    whole clip is emitted, so the plan is never empty and always covers
    [0, duration_s).
    """
    if duration_s <= 0:
        raise ValidationError("duration_s must be > 0")
    if not 0 < stride_s <= window_s:
        raise ValidationError(
            f"stride_s {stride_s} must satisfy 0 < stride_s <= window_s {window_s}"
        )
    windows: List[TimeInterval] = []
    k = 0
    while k * stride_s + stride_s < duration_s:
        start = k * stride_s
        windows.append(TimeInterval(start, min(start + window_s, duration_s)))
        k += 1
    if not windows:
        windows.append(TimeInterval(0.0, duration_s))
    return WindowPlan(
        windows=tuple(windows),
        window_s=window_s,
        stride_s=stride_s,
        duration_s=duration_s,
    )


def window_weights(plan: WindowPlan, t: float) -> List[Tuple[int, float]]:
    """Windows containing t, with uniform weights summing to 1."""
    if not 0 <= t < plan.duration_s:
        raise ValidationError(f"t {t} outside [0, {plan.duration_s})")
    hits = [i for i, w in enumerate(plan.windows) if w.contains(t)]
    weight = 1.0 / len(hits)
    return [(i, weight) for i in hits]


def to_tick(interval: TimeInterval, grid: TickGrid) -> Tuple[int, int]:
    """Half-open tick index range covering the interval.

    Every t in the interval lies in a tick inside the returned range;
    the 1e-9 guard absorbs float noise at exact tick boundaries.
    """
    first = math.floor(interval.start_s / grid.tick_s + 1e-9)
    last = math.ceil(interval.end_s / grid.tick_s - 1e-9)
    return max(first, 0), min(last, grid.ticks)
