"""Exception types shared across the package."""


class PreconditionError(ValueError):
    """An operation was called outside its contract (bad prime, zero, a == b, ...)."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed.

    Raised when a recomputed fact disagrees with what the proof skeleton
    promises. Seeing one means the transcription in this package is wrong.
    """
