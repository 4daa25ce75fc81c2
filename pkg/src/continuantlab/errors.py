"""Exception types shared across the package.

The CLI maps InputError to exit code 2 and ResourceError to exit code 3;
everything else is a plain failure.
"""


class InputError(ValueError):
    """Invalid argument: out of range, non-reduced fraction, bad matrix, ..."""


class ResourceError(RuntimeError):
    """Request exceeds a configured size cap (memory or runtime guard)."""


class NumericalError(RuntimeError):
    """An iteration failed to converge or a numerical invariant broke."""


class ConstructionError(RuntimeError):
    """An ensemble construction stage produced an empty or invalid set."""
