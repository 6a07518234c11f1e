"""Exception types shared across the package."""


class DomainError(ValueError):
    """A quantity left the real domain of a branch or formula.

    Carries the offending value in ``value`` when available.
    """

    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class SingularityError(ValueError):
    """Evaluation was requested on or too close to a model's singular set."""


class PathError(RuntimeError):
    """An integration path crosses a model's singular set."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class ConstructionError(RuntimeError):
    """Model construction failed its structure-equation probe."""
