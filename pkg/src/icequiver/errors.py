"""Shared exception types."""


class IQPError(Exception):
    """Base class for all errors raised by this package."""


class DocumentError(IQPError):
    """A JSON document does not decode to a valid ice quiver with potential."""


class NotMutableError(IQPError):
    """Mutation requested at a vertex where it is not defined."""

    def __init__(self, vertex, status):
        self.vertex = vertex
        self.status = status
        super().__init__(f"vertex {vertex}: {status.reason or status.kind}")


class ReductionError(IQPError):
    """Reduction cannot be carried out (degenerate quadratic part or
    substitutions that fail to separate within the truncation degree)."""


class TruncationError(IQPError):
    """Truncation degree missing, mismatched between operands, or over the
    configured maximum."""
