class BaseAppException(Exception):
    """Base exception for all application exceptions"""

    exit_code = 1

    def __init__(self, message: str, details: str = None):
        self.message = message
        self.details = details
        super().__init__(self.message)


class ValidationError(BaseAppException):
    """Exception raised for invalid inputs and inconsistent flags"""

    exit_code = 2


class DomainError(BaseAppException):
    """Exception raised when a point lies outside the admissible region"""

    pass


class SmallParameterError(DomainError):
    """Exception raised when |p| is below the image-formula cutoff and the fallback is off"""

    pass


class QuadratureError(BaseAppException):
    """Exception raised when an integrand is not finite at a quadrature node"""

    def __init__(self, message: str, node=None, details: str = None):
        self.node = node
        super().__init__(message, details)


class InvalidBoundarySpec(ValidationError):
    """Exception raised for malformed or non-harmonic boundary data"""

    pass


class HypothesisFailure(BaseAppException):
    """Exception raised when the hypotheses of an existence or multiplicity statement do not hold"""

    pass


class InfeasibleWindow(BaseAppException):
    """Exception raised when the window recipe yields D1 >= D2"""

    pass


class EmptySublevelSet(BaseAppException):
    """Exception raised when eta is not below the top critical value"""

    pass


class NoInteriorCritical(BaseAppException):
    """Exception raised when a search is attracted to a face of the window"""

    def __init__(self, message: str, face: str = None, details: str = None):
        self.face = face
        super().__init__(message, details)


class VerificationFailed(BaseAppException):
    """Exception raised when one or more verification checks fail"""

    pass


__all__ = [
    "BaseAppException",
    "ValidationError",
    "DomainError",
    "SmallParameterError",
    "QuadratureError",
    "InvalidBoundarySpec",
    "HypothesisFailure",
    "InfeasibleWindow",
    "EmptySublevelSet",
    "NoInteriorCritical",
    "VerificationFailed",
]
