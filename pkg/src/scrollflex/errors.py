"""Shared exception types for the engine."""


class ScrollflexError(Exception):
    """Base class for every error raised by this package."""


class InvalidInputError(ScrollflexError, ValueError):
    """An argument violates a documented precondition."""


class RingMismatchError(InvalidInputError):
    """Two graded classes from different rings were combined."""


class ResourceLimitError(ScrollflexError):
    """A combinatorial guard (rank product, minor count) was exceeded."""


class IncompleteDataError(ScrollflexError):
    """Evaluation needs intersection numbers that were not supplied."""

    def __init__(self, missing):
        self.missing = tuple(sorted(missing))
        super().__init__(
            "missing intersection numbers: " + ", ".join(self.missing)
        )


class InternalConsistencyError(ScrollflexError):
    """Two independent derivations of the same quantity disagree."""
