"""Exception hierarchy for gcdauth."""


class GCDAuthError(Exception):
    """Base class for all package errors."""


class NumericDomainError(GCDAuthError, ValueError):
    pass


class ShapeError(GCDAuthError, ValueError):
    pass


class ParameterError(GCDAuthError, ValueError):
    pass


class IllConditionedFilterError(GCDAuthError, ValueError):
    pass


class InternalConsistencyError(GCDAuthError, RuntimeError):
    pass


class KeyFormatError(GCDAuthError, ValueError):
    """Malformed key text. ``position`` is the 0-based index of the offending token."""

    def __init__(self, message, position=None):
        if position is not None:
            message = f"token {position}: {message}"
        super().__init__(message)
        self.position = position


class KeyIncompatibleError(GCDAuthError, ValueError):
    """The key cannot be applied to an image of the given size."""


class CapacityError(GCDAuthError, ValueError):
    pass


class NonConvergenceError(GCDAuthError, RuntimeError):
    """Sealing hit its iteration budget.

    Carries the last iterate and the per-iteration count of changed pixels so a
    caller can decide whether to retry with a larger budget.
    """

    def __init__(self, message, last_iterate, change_counts):
        super().__init__(message)
        self.last_iterate = last_iterate
        self.change_counts = list(change_counts)


class AdjustmentFailureError(GCDAuthError, RuntimeError):
    pass


class ImageFormatError(GCDAuthError, ValueError):
    pass


class PixelRangeError(GCDAuthError, ValueError):
    pass


class RegionError(GCDAuthError, ValueError):
    pass
