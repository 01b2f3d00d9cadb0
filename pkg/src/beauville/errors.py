"""Exception types shared across the package."""


class InputError(ValueError):
    """Bad user-supplied data (element indices, malformed filters, ...)."""


class SpecSyntaxError(InputError):
    """Group-spec text failed to parse; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class GroupFileError(InputError):
    """A group file is malformed or inconsistent with its header."""


class ValidationError(ValueError):
    """A constructed object violates its contract (non-normal kernel, bad action, ...)."""


class ResourceLimitError(RuntimeError):
    """A configured size bound (group order, automorphism count, ...) was exceeded."""


class InternalInvariantError(RuntimeError):
    """An internal consistency check failed; indicates a bug, not bad input."""


class InconsistentConfigurationError(ValueError):
    """Numeric invariants requested for a (group order, genera) combination that cannot occur."""
