"""Exception types shared across the package."""


class TensorSymError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(TensorSymError):
    """Malformed input data: bad file syntax, non-prime characteristic, out-of-range index."""


class UsageError(TensorSymError):
    """A call that violates a precondition: mixed fields, mismatched shapes, empty tensor set."""


class ClosureError(TensorSymError):
    """An algebra product left the spanning subspace; carries the offending basis pair."""

    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair


class InternalInvariantError(TensorSymError):
    """A condition that must hold by construction failed; indicates a bug, not bad input."""
