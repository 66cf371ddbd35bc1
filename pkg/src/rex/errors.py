"""Exception and warning types shared across the pipeline."""

from __future__ import annotations


class RexError(Exception):
    """Base class for all errors raised by rex."""


class TranscriptError(RexError):
    """A transcript could not be parsed.  Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None) -> None:
        super().__init__(message)
        self.message = message
        self.line = line

    def __str__(self) -> str:
        if self.line is None:
            return self.message
        return f"line {self.line}: {self.message}"


class MalformedTimestamp(TranscriptError):
    pass


class OrphanOutput(TranscriptError):
    pass


class EmptyInput(TranscriptError):
    pass


class NonMonotonicTime(TranscriptError):
    pass


class DanglingUnderscore(RexError):
    """``_`` used with no earlier result-producing instruction in its burst."""

    def __init__(self, index: int) -> None:
        super().__init__(f"instruction {index} uses '_' but no earlier instruction in its burst produced a result")
        self.index = index


class RexWarning(UserWarning):
    pass


class NoObservableOutput(RexWarning):
    """The final instruction of a burst printed nothing; emitted as a smoke test."""
