"""Exception hierarchy shared across the toolkit.

Two broad families matter for the CLI exit-code contract: validation
errors (bad inputs, violated preconditions, malformed files) and
computation errors (a construction or numerical procedure failed on
otherwise admissible input).
"""


class ReebtkError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(ReebtkError):
    """Input fails a structural precondition or declared invariant."""


class DomainError(ValidationError):
    """Parameter value outside the curve or profile domain."""


class DimensionError(ValidationError):
    """Matrix or vector dimensions do not match."""


class ShapeError(ValidationError):
    """Curve does not have the required local normal form."""


class ComputationError(ReebtkError):
    """A computation failed on admissible input."""


class ContactViolationError(ComputationError):
    """Contact determinant is zero or positive where negativity is required."""


class SingularityError(ComputationError):
    """Curve passes through (or too close to) the origin of the h-plane."""


class ResolutionError(ComputationError):
    """Refinement limit reached without meeting the resolution criterion."""


class InconsistencyError(ComputationError):
    """A quantity that must be an integer is too far from one."""


class ConstructionError(ComputationError):
    """A curve surgery template could not be built for the given data."""


class NumericError(ComputationError):
    """Non-finite value encountered during evaluation."""
