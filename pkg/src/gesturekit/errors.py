"""Exception types shared across the pipeline."""


class GestureKitError(Exception):
    """Base class for all pipeline errors."""


class IncompatibleClips(GestureKitError):
    """Two clips disagree on fps, joint set, or frame count."""


class AlignmentMismatch(GestureKitError):
    """Transcript tokens and word timings diverge."""


class TextGridError(GestureKitError):
    """TextGrid content is missing the words tier or is malformed."""

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)
        self.line = line


class ScriptError(GestureKitError):
    """A gesture script violates its invariants."""


class MalformedReply(GestureKitError):
    """LLM reply contains no parseable JSON array."""


class ContractViolation(GestureKitError):
    """LLM reply parsed but breaks the output contract."""


class TransportError(GestureKitError):
    """LLM request failed after retries in strict-online mode."""


class NoGestureAvailable(GestureKitError):
    """Dictionary has no unit for the requested intent/tag."""


class DictionaryError(GestureKitError):
    """Dictionary manifest or unit validation failed."""


class CoverageError(GestureKitError):
    """Base gesture file does not cover the timeline in strict mode."""
