class GraphFourierError(ValueError):
    """Base class for input errors raised by graphfourier."""


class ValidationError(GraphFourierError):
    """Malformed input: non-finite values, bad shapes, unnormalized weights."""


class DomainError(GraphFourierError):
    """Well-formed input outside the domain of an operation."""


class FallbackWarning(UserWarning):
    """A numerical method fell back to a secondary algorithm."""
