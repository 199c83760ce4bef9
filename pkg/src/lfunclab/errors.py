"""Exception taxonomy. Numerical failure modes are typed so that callers can
distinguish misplaced contours from genuine non-convergence."""


class LfunclabError(Exception):
    """Base class for all package errors."""


class PoleError(LfunclabError):
    """Gamma factor evaluated at or across a pole."""


class PoleOnContour(PoleError):
    """A contour abscissa sits on or left of a pole of the integrand."""


class AccuracyError(LfunclabError):
    """Requested point lies outside the validated accuracy regime."""


class NonConvergence(LfunclabError):
    """Quadrature or series truncation failed to certify the tolerance."""


class QuadratureFailure(NonConvergence):
    """Oscillatory quadrature could not resolve the integrand."""


class ViolationError(LfunclabError):
    """A bound check failed; carries the offending point."""

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class InternalMismatch(LfunclabError):
    """Two supposedly identical evaluation paths disagreed."""


class NotInvertible(LfunclabError):
    """Modular inverse requested for a non-unit."""


class CapacityError(LfunclabError):
    """Requested table or series size exceeds supported limits."""


class DomainError(LfunclabError):
    """Argument outside the mathematical domain of the operation."""


class ParseError(LfunclabError):
    """Coefficient or config file does not parse."""


class InvariantViolation(LfunclabError):
    """Loaded data violates a structural invariant; names the failing index."""


class CoverageError(LfunclabError):
    """Stored coefficients do not cover the required range."""

    def __init__(self, message, required=None):
        super().__init__(message)
        self.required = required


class NotSignLike(LfunclabError):
    """Root number formula did not land within tolerance of +-1."""


class HypothesisViolation(LfunclabError):
    """Inputs violate the hypotheses of the identity being verified."""


class SpacingViolation(LfunclabError):
    """Frequency list is not delta separated."""


class FitFailure(LfunclabError):
    """Asymptotic fit did not produce a usable slope or frequency."""
