"""Face detection interface, identity tracking and crop extraction.

Detections are associated into stable person identities by greedy
best-first IoU matching. Only boxes and ids are retained; pixel crops
are handed to the visual backend and dropped immediately afterwards.

The concrete detector is a plugin. The built-in `MarkerDetector` finds
the solid-color marker rectangles painted into synthetic fixtures, so
tracking and the full pipeline are testable without any face model;
a real detector (e.g. an MTCNN wrapper) plugs in through the same
`FaceDetector` protocol.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Protocol, Tuple

import numpy as np

from . import _kernels
from .errors import ValidationError
from .media.ingest import FrameRef
from .media.synth import MARKER_RGB

IOU_MATCH_THRESHOLD = 0.3
TRACK_TTL_S = 1.0
CROP_SIZE = 224

Bbox = Tuple[float, float, float, float]  # (x, y, w, h), pixels, origin top-left


@dataclass(frozen=True)
class FaceDetection:
    """One detected face in one frame."""

    frame_index: int
    bbox: Bbox
    detector_confidence: float

    def __post_init__(self):
        x, y, w, h = self.bbox
        if w <= 0 or h <= 0:
            raise ValidationError(f"degenerate bbox {self.bbox}")
        if not 0.0 <= self.detector_confidence <= 1.0:
            raise ValidationError(
                f"detector_confidence {self.detector_confidence} outside [0,1]"
            )


@dataclass
class PersonTrack:
    """A tracked identity: time-ordered boxes, no pixel data.

    person_id values are assigned in order of first appearance and never
    reused within a session.
    """

    person_id: int
    boxes: List[Tuple[float, Bbox]] = field(default_factory=list)
    active: bool = True

    @property
    def last_t(self) -> float:
        return self.boxes[-1][0]

    @property
    def last_bbox(self) -> Bbox:
        return self.boxes[-1][1]

    def to_json(self) -> Dict:
        return {
            "person_id": self.person_id,
            "boxes": [
                {
                    "t": float(t),
                    "x": float(b[0]),
                    "y": float(b[1]),
                    "w": float(b[2]),
                    "h": float(b[3]),
                }
                for t, b in self.boxes
            ],
        }

    @classmethod
    def from_json(cls, data: Dict) -> "PersonTrack":
        return cls(
            person_id=int(data["person_id"]),
            boxes=[
                (float(b["t"]), (float(b["x"]), float(b["y"]), float(b["w"]), float(b["h"])))
                for b in data["boxes"]
            ],
            active=False,
        )


class FaceDetector(Protocol):
    """Detector plugin contract: frame in, confidence-sorted detections out."""

    def detect(self, frame: FrameRef) -> List[FaceDetection]: ...


def clamp_bbox(bbox: Bbox, width: int, height: int) -> Optional[Bbox]:
    """Intersect a bbox with the frame; None when nothing remains."""
    x, y, w, h = bbox
    x0, y0 = max(x, 0.0), max(y, 0.0)
    x1, y1 = min(x + w, float(width)), min(y + h, float(height))
    if x1 - x0 <= 0 or y1 - y0 <= 0:
        return None
    return (x0, y0, x1 - x0, y1 - y0)


class MarkerDetector:
    """Finds rectangles of the exact marker color painted by media.synth.

    Connected components of marker-colored pixels become detections with
    confidence 1.0; the component bounding box equals the drawn box as
    long as its border is intact.
    """

    def __init__(self, marker_rgb: Tuple[int, int, int] = MARKER_RGB):
        self.marker_rgb = np.asarray(marker_rgb, dtype=np.uint8)

    def detect(self, frame: FrameRef) -> List[FaceDetection]:
        from scipy import ndimage

        mask = np.all(frame.pixels == self.marker_rgb, axis=-1)
        if not mask.any():
            return []
        labels, count = ndimage.label(mask)
        height, width = mask.shape
        detections = []
        for sl in ndimage.find_objects(labels):
            if sl is None:
                continue
            y, x = sl[0].start, sl[1].start
            h, w = sl[0].stop - y, sl[1].stop - x
            if w < 3 or h < 3:  # ignore stray matching pixels
                continue
            bbox = clamp_bbox((float(x), float(y), float(w), float(h)), width, height)
            if bbox is not None:
                detections.append(
                    FaceDetection(frame.frame_index, bbox, detector_confidence=1.0)
                )
        # Descending confidence; spatial order breaks ties deterministically.
        detections.sort(key=lambda d: (-d.detector_confidence, d.bbox[0], d.bbox[1]))
        return detections


class Tracker:
    """Per-session track state fed by one pipeline stage at a time."""

    def __init__(
        self,
        iou_threshold: float = IOU_MATCH_THRESHOLD,
        ttl_s: float = TRACK_TTL_S,
    ):
        self.iou_threshold = iou_threshold
        self.ttl_s = ttl_s
        self.tracks: List[PersonTrack] = []
        self._next_id = 0

    def associate(
        self, detections: List[FaceDetection], t: float
    ) -> Dict[int, int]:
        """Update tracks with one frame's detections at timestamp t.

        Returns the assignment {detection index -> person_id}. Pairs with
        IoU >= threshold are matched greedily (best IoU first); every
        unmatched detection opens a new track; active tracks unseen for
        longer than the TTL are retired first and cannot match.
        """
        for track in self.tracks:
            if track.active and t - track.last_t > self.ttl_s:
                track.active = False
        candidates = [tr for tr in self.tracks if tr.active]
        for track in candidates:
            if track.boxes and t <= track.last_t:
                raise ValidationError(
                    f"frame at t={t} not later than track {track.person_id} "
                    f"(last t={track.last_t})"
                )

        assignment: Dict[int, int] = {}
        if candidates and detections:
            track_boxes = np.array([tr.last_bbox for tr in candidates], dtype=np.float64)
            det_boxes = np.array([d.bbox for d in detections], dtype=np.float64)
            ious = _kernels.iou_matrix(track_boxes, det_boxes)
            pairs = [
                (ious[ti, di], ti, di)
                for ti in range(len(candidates))
                for di in range(len(detections))
                if ious[ti, di] >= self.iou_threshold
            ]
            pairs.sort(key=lambda p: (-p[0], p[1], p[2]))
            used_tracks, used_dets = set(), set()
            for _, ti, di in pairs:
                if ti in used_tracks or di in used_dets:
                    continue
                used_tracks.add(ti)
                used_dets.add(di)
                track = candidates[ti]
                track.boxes.append((t, detections[di].bbox))
                assignment[di] = track.person_id

        for di, det in enumerate(detections):
            if di not in assignment:
                track = PersonTrack(person_id=self._next_id)
                self._next_id += 1
                track.boxes.append((t, det.bbox))
                self.tracks.append(track)
                assignment[di] = track.person_id
        return assignment


def expand_to_square(bbox: Bbox, width: int, height: int) -> Optional[Bbox]:
    """Grow the shorter side around the bbox center, then clamp to frame."""
    x, y, w, h = bbox
    side = max(w, h)
    cx, cy = x + w / 2.0, y + h / 2.0
    return clamp_bbox((cx - side / 2.0, cy - side / 2.0, side, side), width, height)


def crop_face(frame: FrameRef, bbox: Bbox, size: int = CROP_SIZE) -> Optional[np.ndarray]:
    """Extract a size x size RGB crop for the visual backend.

    The bbox is first expanded to a square around its center (clamped to
    the frame), then resized. Returns None for a bbox that degenerates
    after clamping; callers skip the detection. The returned buffer is
    transient and must not be persisted.
    """
    import cv2

    height, width = frame.pixels.shape[:2]
    square = expand_to_square(bbox, width, height)
    if square is None:
        return None
    x, y, w, h = square
    x0, y0 = int(round(x)), int(round(y))
    x1, y1 = int(round(x + w)), int(round(y + h))
    x1, y1 = min(x1, width), min(y1, height)
    if x1 - x0 <= 0 or y1 - y0 <= 0:
        return None
    region = frame.pixels[y0:y1, x0:x1]
    if region.shape[0] == size and region.shape[1] == size:
        return np.ascontiguousarray(region)
    return cv2.resize(region, (size, size), interpolation=cv2.INTER_LINEAR)
