"""Exception hierarchy shared by all modules."""


class StrongGradeError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(StrongGradeError, ValueError):
    """Malformed input data (graph, groupoid, table, document)."""


class DomainError(StrongGradeError, ValueError):
    """An operation was called outside the domain it supports."""


class ResourceError(StrongGradeError, RuntimeError):
    """A configured enumeration or truncation cap was exceeded."""


class GraphConditionError(StrongGradeError):
    """A graph-level hypothesis failed; ``witness`` names the culprit."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotStronglyGradedError(StrongGradeError):
    """A factorisation was requested where none exists."""

    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class InternalInconsistencyError(StrongGradeError, AssertionError):
    """Two routes that must agree did not. Always a bug."""


class UnsupportedFeatureError(StrongGradeError, NotImplementedError):
    pass
