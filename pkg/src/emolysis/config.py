"""Analysis and server configuration.

Values resolve as CLI flags > environment > config file > defaults.
The config file is YAML; recognized keys mirror the CLI flags
(`tick_s`, `window_s`, `stride_s`, ...) plus the nested `fusion.weights`
and `backends.<modality>` tables.
"""

import os
from dataclasses import dataclass, field, replace
from typing import Dict, Optional

import yaml

from .errors import ValidationError
from .model import MODALITY_ORDER, ModalityTag

ENV_STORE = "EMOLYSIS_STORE"
ENV_PORT = "EMOLYSIS_PORT"

DEFAULT_STORE = "emolysis-store"
DEFAULT_PORT = 8000


@dataclass(frozen=True)
class AnalysisConfig:
    """Knobs of one analysis run; identical config => identical output."""

    tick_s: float = 0.25
    window_s: float = 15.0
    stride_s: float = 7.5
    visual_stride_frames: int = 1
    audio_rate_hz: int = 16000
    emotion_threshold: float = 0.5
    iou_threshold: float = 0.3
    track_ttl_s: float = 1.0
    detector: str = "marker"
    backends: Dict[str, str] = field(
        default_factory=lambda: {tag.value: "reference" for tag in MODALITY_ORDER}
    )
    fusion_weights: Dict[str, float] = field(
        default_factory=lambda: {tag.value: 1.0 for tag in MODALITY_ORDER}
    )
    label_maps_path: Optional[str] = None

    def __post_init__(self):
        if self.tick_s <= 0:
            raise ValidationError("tick_s must be > 0")
        if not 0 < self.stride_s <= self.window_s:
            raise ValidationError("need 0 < stride_s <= window_s")
        if self.visual_stride_frames < 1:
            raise ValidationError("visual_stride_frames must be >= 1")
        if not 0 < self.emotion_threshold < 1:
            raise ValidationError("emotion_threshold must be in (0,1)")

    def weights_by_tag(self) -> Dict[ModalityTag, float]:
        return {tag: self.fusion_weights.get(tag.value, 1.0) for tag in MODALITY_ORDER}

    def to_json(self) -> Dict:
        return {
            "tick_s": self.tick_s,
            "window_s": self.window_s,
            "stride_s": self.stride_s,
            "visual_stride_frames": self.visual_stride_frames,
            "audio_rate_hz": self.audio_rate_hz,
            "emotion_threshold": self.emotion_threshold,
            "detector": self.detector,
            "backends": dict(self.backends),
            "fusion_weights": dict(self.fusion_weights),
        }


def analysis_config_from_dict(data: Dict) -> AnalysisConfig:
    cfg = AnalysisConfig()
    plain = {
        key: data[key]
        for key in (
            "tick_s",
            "window_s",
            "stride_s",
            "visual_stride_frames",
            "audio_rate_hz",
            "emotion_threshold",
            "iou_threshold",
            "track_ttl_s",
            "detector",
            "label_maps_path",
        )
        if key in data
    }
    if plain:
        cfg = replace(cfg, **plain)
    if "backends" in data:
        merged = dict(cfg.backends)
        merged.update(data["backends"])
        cfg = replace(cfg, backends=merged)
    if "fusion" in data and "weights" in data["fusion"]:
        merged = dict(cfg.fusion_weights)
        merged.update(data["fusion"]["weights"])
        cfg = replace(cfg, fusion_weights=merged)
    return cfg


def load_analysis_config(path: Optional[str]) -> AnalysisConfig:
    if path is None:
        return AnalysisConfig()
    with open(path, "r", encoding="utf-8") as fh:
        data = yaml.safe_load(fh) or {}
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: config root must be a mapping")
    return analysis_config_from_dict(data)


@dataclass(frozen=True)
class ServerConfig:
    store_dir: str = DEFAULT_STORE
    port: int = DEFAULT_PORT
    workers: Optional[int] = None  # None = CPU count
    ui_dir: Optional[str] = None


def server_config_from_env(
    store_dir: Optional[str] = None,
    port: Optional[int] = None,
    config_file: Optional[Dict] = None,
) -> ServerConfig:
    """Resolve server settings: explicit args > env > config file > defaults."""
    file_cfg = config_file or {}
    resolved_store = (
        store_dir
        or os.environ.get(ENV_STORE)
        or file_cfg.get("store")
        or DEFAULT_STORE
    )
    resolved_port = (
        port
        if port is not None
        else int(os.environ.get(ENV_PORT, file_cfg.get("port", DEFAULT_PORT)))
    )
    return ServerConfig(
        store_dir=resolved_store,
        port=resolved_port,
        ui_dir=file_cfg.get("ui_dir") or os.environ.get("EMOLYSIS_UI"),
    )
