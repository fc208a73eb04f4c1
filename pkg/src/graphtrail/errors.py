"""Typed errors with stable wire codes.

Every error that can cross the HTTP boundary carries a ``code`` drawn from
a closed set; the service layer maps codes to status codes and renders the
error envelope. Internal callers catch the classes, the wire sees the codes.
"""

from __future__ import annotations


class GraphTrailError(Exception):
    """Base class; ``code`` is the wire-level error code."""

    code = "io_error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class UnknownDatasetError(GraphTrailError):
    code = "unknown_dataset"


class UnknownSessionError(GraphTrailError):
    code = "unknown_session"


class UnknownBookmarkError(GraphTrailError):
    code = "unknown_bookmark"


class InvalidSpecError(GraphTrailError):
    """Malformed request, spec, schema, or payload shape."""

    code = "invalid_spec"


class InvalidPredicateError(GraphTrailError):
    """Bad predicate: unknown operator, undeclared attribute, tag mismatch."""

    code = "invalid_predicate"


class DeadElementError(GraphTrailError):
    """Element is tombstoned or was never allocated."""

    code = "dead_element"


class SessionBusyError(GraphTrailError):
    """A second request raced an in-flight request on the same session."""

    code = "session_busy"


class SessionTerminalError(GraphTrailError):
    """Continue/stop semantics violated: session already done or stopped."""

    code = "session_terminal"


class DanglingEdgeError(GraphTrailError):
    """An edge references a vertex that is not part of the same payload/load."""

    code = "dangling_edge"


class StorageError(GraphTrailError):
    code = "io_error"
