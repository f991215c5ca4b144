"""Exception types shared across the library."""


class AssertionViolation(RuntimeError):
    """A proved size or interiority invariant failed.

    This signals an implementation bug or a corrupted region geometry,
    never bad user input.
    """


class InsufficientVertices(RuntimeError):
    """The polytope does not have enough linearly independent vertices."""


class DepthExceeded(RuntimeError):
    """Mediant descent ran past its iteration cap; the caller violated a
    precondition (no low-complexity rational in the interval)."""


class OrientationError(RuntimeError):
    """Binary-search endpoints do not bracket the target action."""


class DegenerateGeometry(RuntimeError):
    """Randomly drawn points were linearly dependent; retry with fresh draws."""


class FullyCovered(Exception):
    """The closed best-response regions already cover the whole simplex."""


class RetryBudgetExhausted(RuntimeError):
    """Too many consecutive low-probability failures; the run is abandoned."""


class ParseError(ValueError):
    """An instance file is structurally malformed."""


class DomainError(ValueError):
    """A payoff value lies outside the unit interval or is otherwise invalid."""
