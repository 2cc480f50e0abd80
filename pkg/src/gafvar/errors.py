"""Exception hierarchy shared by all modules."""


class GafvarError(Exception):
    """Base class for library errors."""


class DomainError(GafvarError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class PoleError(DomainError):
    """The requested value sits on a pole of a meromorphic expression."""


class QuadratureBudgetError(GafvarError, RuntimeError):
    """An adaptive quadrature could not reach its error target.

    The best available estimate is kept on the ``result`` attribute.
    """

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class DegenerateSampleError(GafvarError, RuntimeError):
    """A random function sample came too close to vanishing at a node."""
