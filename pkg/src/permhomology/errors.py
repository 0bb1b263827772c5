"""Exceptions shared across the package."""


class CapExceeded(RuntimeError):
    """An enumeration or search grew past its configured resource cap.

    Carries enough context to report partial progress: ``attained`` is
    whatever lower bound or partial object the caller managed to certify
    before giving up (None when nothing useful was certified).
    """

    def __init__(self, message, attained=None):
        super().__init__(message)
        self.attained = attained


class InvariantViolation(RuntimeError):
    """An internal consistency check failed.

    This always indicates a bug (or an input outside the supported class),
    never a resource limit, so callers must not downgrade it.
    """
