"""Exception types shared across the package."""


class PrecisionError(ValueError):
    """A requested coefficient lies outside the tracked truncation window."""


class DomainError(ValueError):
    """An operation was called outside its mathematical domain."""


class NotInvertibleError(DomainError):
    """A series has no compositional (or multiplicative) inverse."""


class NonSimpleStratumError(ValueError):
    """The covering has a degenerate critical point or colliding critical values."""


class SearchFailure(RuntimeError):
    """The genus-one critical point search did not find the expected count."""


class DegenerateError(ValueError):
    """A matrix or metric coefficient is numerically singular."""


class IncompatibleDifferentialError(ValueError):
    """The primary differential does not match the covering kind."""
