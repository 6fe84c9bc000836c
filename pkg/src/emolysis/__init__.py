"""Emolysis: group emotion analysis toolkit.

Turns an input video into synchronized per-person and group timelines
of multilabel emotions plus continuous valence/arousal, computed from
pluggable visual, audio and linguistic backends, and exposes them
through a session service, a CLI and an interactive UI.
"""

__version__ = "0.1.0"
