"""
Error hierarchy shared by every lambdaosc module.

Each error carries a machine-readable code and the process exit code the
CLI reports for it (1 for configuration problems, 2 for runtime/domain
failures).
"""

from enum import Enum
from typing import Any, Dict


class ErrorCode(Enum):
    DOMAIN = "domain"
    DOMAIN_EXIT = "domain_exit"
    SINGULARITY = "singularity"
    POLE = "pole"
    ORIGIN = "origin"
    MAX_STEPS = "max_steps"
    INSUFFICIENT_CYCLES = "insufficient_cycles"
    GRID_TOO_COARSE = "grid_too_coarse"
    NOT_BOUND_STATE = "not_bound_state"
    NOT_NORMALIZABLE = "not_normalizable"
    IMAGINARY_G = "imaginary_g"
    DEGENERATE_RECURSION = "degenerate_recursion"
    CONVERGENCE = "convergence"
    KIND_MISMATCH = "kind_mismatch"
    CONFIG = "config"


class LambdaOscError(Exception):
    code = ErrorCode.DOMAIN
    exit_code = 2

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = context

    def to_dict(self) -> Dict[str, Any]:
        return {
            'code': self.code.value,
            'message': self.message,
            'context': {k: v if isinstance(v, (int, float, str, bool)) else repr(v)
                        for k, v in self.context.items()},
        }


class DomainError(LambdaOscError):
    """A point lies outside the region where the metric 1+λr² is positive."""
    code = ErrorCode.DOMAIN


class DomainExitError(LambdaOscError):
    """An integration entered the guard band next to the degenerate boundary."""
    code = ErrorCode.DOMAIN_EXIT


class SingularityError(LambdaOscError):
    """Evaluation on an axis where an inverse-square barrier is active."""
    code = ErrorCode.SINGULARITY


class PoleError(LambdaOscError):
    code = ErrorCode.POLE


class OriginError(LambdaOscError):
    code = ErrorCode.ORIGIN


class MaxStepsExceeded(LambdaOscError):
    code = ErrorCode.MAX_STEPS


class InsufficientCyclesError(LambdaOscError):
    code = ErrorCode.INSUFFICIENT_CYCLES


class GridTooCoarse(LambdaOscError):
    code = ErrorCode.GRID_TOO_COARSE


class NotBoundStateError(LambdaOscError):
    code = ErrorCode.NOT_BOUND_STATE


class NotNormalizableError(LambdaOscError):
    code = ErrorCode.NOT_NORMALIZABLE


class ImaginaryGError(LambdaOscError):
    code = ErrorCode.IMAGINARY_G


class DegenerateRecursionError(LambdaOscError):
    code = ErrorCode.DEGENERATE_RECURSION


class ConvergenceError(LambdaOscError):
    code = ErrorCode.CONVERGENCE


class KindMismatchError(LambdaOscError):
    """A velocity-kind state was handed to a momentum-kind evaluator, or vice versa."""
    code = ErrorCode.KIND_MISMATCH


class ConfigError(LambdaOscError):
    code = ErrorCode.CONFIG
    exit_code = 1
