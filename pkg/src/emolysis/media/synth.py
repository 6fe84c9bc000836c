"""Deterministic synthetic media for tests, demos and benchmarks.

Generated clips contain face-stand-in markers: solid magenta rectangles
with a per-person interior pattern that changes over time, moving along
non-crossing lanes. The marker detector in the tracking module finds
these rectangles exactly, so the whole pipeline runs model-free and
reproducibly. A full-frame white flash and a sine beep at the same
timestamp support the audio/video synchronization check.

Everything is a pure function of its parameters: regenerating a clip
yields byte-identical files.
"""

from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .riffavi import RawAviWriter

MARKER_RGB = (255, 0, 255)  # exact-match color the stub detector scans for
DEFAULT_BOX = 28


@dataclass(frozen=True)
class SynthSpec:
    """Parameters of a synthetic clip."""

    duration_s: float = 30.0
    fps: float = 25.0
    width: int = 160
    height: int = 120
    persons: int = 2
    box: int = DEFAULT_BOX
    sample_rate: Optional[int] = 16000
    flash_t: Optional[float] = 10.0
    beep_t: Optional[float] = 10.0
    beep_len_s: float = 0.5
    beep_hz: float = 1000.0

    @property
    def frame_count(self) -> int:
        return round(self.duration_s * self.fps)


def marker_boxes(spec: SynthSpec, frame_index: int) -> List[Tuple[int, int, int, int]]:
    """Ground-truth (x, y, w, h) boxes drawn at a given frame.

    Each person moves horizontally in its own lane as a triangle wave
    (max 2 px/frame), so consecutive boxes overlap heavily and lanes
    never cross.
    """
    boxes = []
    lane_h = spec.height // spec.persons
    margin = 4
    travel = spec.width - spec.box - 2 * margin
    for p in range(spec.persons):
        speed = 1 + p % 2  # 1 or 2 px per frame
        phase = (frame_index * speed + p * 17) % (2 * travel)
        x = margin + (travel - abs(phase - travel))
        y = p * lane_h + (lane_h - spec.box) // 2
        boxes.append((x, y, spec.box, spec.box))
    return boxes


def render_frame(spec: SynthSpec, frame_index: int) -> np.ndarray:
    """Render one HxWx3 uint8 RGB frame."""
    y_ramp = np.arange(spec.height, dtype=np.uint16)[:, None]
    x_ramp = np.arange(spec.width, dtype=np.uint16)[None, :]
    base = ((x_ramp + y_ramp + frame_index) % 97).astype(np.uint8)
    frame = np.stack([base + 40, base + 60, base + 80], axis=-1)

    if spec.flash_t is not None and frame_index == round(spec.flash_t * spec.fps):
        frame[:] = 255

    for p, (x, y, w, h) in enumerate(marker_boxes(spec, frame_index)):
        frame[y : y + h, x : x + w] = MARKER_RGB
        # Person- and time-specific interior so crops differ per person
        # and evolve over the clip; the marker border stays intact.
        ix, iy = x + w // 4, y + h // 4
        iw, ih = w // 2, h // 2
        frame[iy : iy + ih, ix : ix + iw] = (
            (37 * p + 11) % 256,
            (frame_index * 5 + 83 * p) % 256,
            (frame_index * 3) % 256,
        )
    return frame


def render_audio(spec: SynthSpec) -> Optional[np.ndarray]:
    """Render the full mono int16 track: silence plus one beep burst."""
    if spec.sample_rate is None:
        return None
    total = round(spec.duration_s * spec.sample_rate)
    samples = np.zeros(total, dtype=np.int16)
    if spec.beep_t is not None:
        start = round(spec.beep_t * spec.sample_rate)
        n = round(spec.beep_len_s * spec.sample_rate)
        n = min(n, total - start)
        if n > 0:
            t = np.arange(n, dtype=np.float64) / spec.sample_rate
            tone = 0.5 * np.sin(2.0 * np.pi * spec.beep_hz * t)
            samples[start : start + n] = np.round(tone * 32767.0).astype(np.int16)
    return samples


def write_clip(path: str, spec: SynthSpec = SynthSpec()) -> SynthSpec:
    """Write the synthetic clip as an uncompressed AVI; returns the spec."""
    writer = RawAviWriter(
        path,
        width=spec.width,
        height=spec.height,
        fps=spec.fps,
        sample_rate=spec.sample_rate,
    )
    with writer:
        track = render_audio(spec)
        if track is not None:
            writer.add_audio(track)
        for i in range(spec.frame_count):
            writer.add_frame(render_frame(spec, i))
    return spec
