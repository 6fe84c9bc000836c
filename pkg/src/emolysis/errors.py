"""Exception hierarchy shared across the toolkit."""


class EmolysisError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(EmolysisError):
    """Invalid argument or malformed value (bad range, wrong arity, ...)."""


class IngestError(EmolysisError):
    """Media file cannot be opened or decoded."""


class PartialSegmentError(IngestError):
    """Decode failed mid-stream; carries the last successfully decoded frame."""

    def __init__(self, message: str, last_good_frame: int):
        super().__init__(message)
        self.last_good_frame = last_good_frame


class ModalityUnavailable(EmolysisError):
    """A modality cannot be produced for this input (e.g. no audio stream).

    Callers skip the affected modality; this is a signal, not a failure.
    """


class BackendError(EmolysisError):
    """An inference backend failed at runtime."""


class RegistryError(EmolysisError):
    """Unknown or conflicting registry entry (label spaces, backends)."""


class StateError(EmolysisError):
    """Operation not valid in the current session state."""


class NotFoundError(EmolysisError):
    """Unknown session or resource id."""
