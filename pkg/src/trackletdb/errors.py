"""Exception types shared across the package."""

from __future__ import annotations


class TrackletDBError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgument(TrackletDBError, ValueError):
    """An argument violates a documented precondition or type invariant."""

    def __init__(self, message: str, *, invariant: str | None = None):
        super().__init__(message)
        self.invariant = invariant if invariant is not None else message


class MalformedInput(TrackletDBError, ValueError):
    """A structured input document (e.g. a detections file) failed validation."""

    def __init__(self, message: str, *, byte_offset: int | None = None):
        super().__init__(message)
        self.byte_offset = byte_offset


class AnnotationError(TrackletDBError):
    """An annotator client failed; ``stage`` names the failing client."""

    def __init__(self, stage: str, message: str = ""):
        super().__init__(f"{stage}: {message}" if message else stage)
        self.stage = stage


class UnsupportedVersion(TrackletDBError):
    """A stored database declares a format version this build cannot read."""

    def __init__(self, version: object):
        super().__init__(f"unsupported database format version: {version!r}")
        self.version = version


class CorruptDatabase(TrackletDBError):
    """A stored database violates an invariant; ``invariant`` names the first failure."""

    def __init__(self, invariant: str, message: str | None = None):
        super().__init__(message or invariant)
        self.invariant = invariant


class NotFound(TrackletDBError):
    """A referenced video, record, or session is not registered."""


class ParseError(TrackletDBError):
    """A query failed to parse.

    ``position`` is the byte offset of the offending token in the UTF-8
    encoding of the input; ``expected`` is the set of token descriptions the
    parser would have accepted there.
    """

    def __init__(self, message: str, *, position: int, expected: frozenset[str] = frozenset()):
        expected_note = f" (expected {', '.join(sorted(expected))})" if expected else ""
        super().__init__(f"{message} at byte {position}{expected_note}")
        self.position = position
        self.expected = frozenset(expected)
        self.raw_line: str | None = None


class SemanticError(TrackletDBError):
    """A query parsed but references an unknown name or ill-typed construct."""

    def __init__(self, message: str, *, name: str | None = None, position: int | None = None):
        super().__init__(message)
        self.name = name
        self.position = position


class EvaluationError(TrackletDBError):
    """A query could not be evaluated against a record."""


class UntranslatableQuestion(TrackletDBError):
    """No translator backend produced a query for the question."""

    def __init__(self, question: str, causes: list[tuple[str, Exception]] | None = None):
        notes = "; ".join(f"{name}: {err}" for name, err in (causes or []))
        super().__init__(f"cannot translate question: {question!r}" + (f" ({notes})" if notes else ""))
        self.question = question
        self.causes = list(causes or [])


class MalformedReply(TrackletDBError):
    """An LLM reply carried no extractable query line."""
