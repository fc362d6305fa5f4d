"""
ThermoCheck Errors
Exception hierarchy shared by every module
"""

from typing import Optional


class ThermoCheckError(Exception):
    """Base class for all ThermoCheck failures"""

    exit_code = 3

    def __init__(self, message: str, point: Optional[tuple] = None):
        super().__init__(message)
        self.point = point


class DomainViolation(ThermoCheckError):
    """Point outside the admissible domain of a field or EOS formula"""


class NonFiniteError(ThermoCheckError):
    """Expression produced NaN or Inf"""


class NewtonDivergence(ThermoCheckError):
    """Implicit inversion did not converge"""


class SingularHessian(ThermoCheckError):
    """Hessian not invertible within the condition bound"""


class PivotSignViolation(ThermoCheckError):
    """Reciprocal pivot variable is not one-signed over the domain"""


class MonotonicityViolation(ThermoCheckError):
    """Exchange pivot derivative vanished or changed sign"""


class BracketFailure(ThermoCheckError):
    """No sign change found while bracketing a scalar root"""


class DimensionMismatch(ThermoCheckError):
    """Incompatible dimensions between a transform and its field"""

    exit_code = 2


class AsymmetryTooLarge(ThermoCheckError):
    """Matrix handed to the classifier is not symmetric within tolerance"""


class SamplerExhausted(ThermoCheckError):
    """Rejection sampling discarded more than 99% of candidates"""


class ConfigError(ThermoCheckError):
    """Invalid run configuration or command-line usage"""

    exit_code = 2


class ChainStageError(ThermoCheckError):
    """A chain step failed; carries the stage index"""

    def __init__(self, stage: int, label: str, cause: ThermoCheckError):
        super().__init__(f"stage {stage} ({label}): {cause}", getattr(cause, "point", None))
        self.stage = stage
        self.label = label
        self.cause = cause
        self.exit_code = cause.exit_code
