from .ingest import (
    DEFAULT_AUDIO_RATE_HZ,
    AudioClip,
    FrameRef,
    MediaInfo,
    audio,
    frames,
    open_media,
    probe,
)

__all__ = [
    "DEFAULT_AUDIO_RATE_HZ",
    "AudioClip",
    "FrameRef",
    "MediaInfo",
    "audio",
    "frames",
    "open_media",
    "probe",
]
