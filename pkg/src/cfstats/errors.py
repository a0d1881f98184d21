"""Exception types shared across the package."""


class WidthError(ValueError):
    """Input exceeds the supported integer width."""


class ResourceGuardError(RuntimeError):
    """A requested allocation exceeds the configured memory budget."""


class InternalError(RuntimeError):
    """An internal consistency check failed (indicates a bug)."""
