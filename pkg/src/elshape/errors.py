"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class SingularityError(ValueError):
    """Evaluation requested at (or too close to) a singular point."""


class AliasingError(ValueError):
    """Requested modal order exceeds what the receiver grid can resolve."""


class SolveError(RuntimeError):
    """A linear solve failed (rank deficiency, underflow, non-finite data)."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration input."""
