"""Exception types shared across the package.

The CLI maps these onto process exit codes: validation failures exit 1,
partial results exit 2, resource limits exit 3.
"""


class CircuitGpError(Exception):
    """Base class for all package errors."""


class ValidationError(CircuitGpError, ValueError):
    """Bad arguments, malformed config, or schema violations."""


class CircuitStructureError(ValidationError):
    """A genotype violates its structural invariants."""


class CircuitParseError(ValidationError):
    """Circuit text could not be parsed. Carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class UndefinedCorrelationError(ValidationError):
    """Correlation requested on a constant column."""


class PartialResultError(CircuitGpError):
    """A budgeted search ended before reaching its requested size.

    ``partial`` holds whatever was produced (estimate, genotype list, ...)
    and ``achieved`` how much of the request was satisfied.
    """

    def __init__(self, message: str, partial=None, achieved: int = 0):
        super().__init__(message)
        self.partial = partial
        self.achieved = achieved


class ResourceLimitError(CircuitGpError):
    """A computation would exceed a configured resource cap."""


class SearchExhaustedError(ResourceLimitError):
    """A minimality search hit its size cap without finding a witness."""
