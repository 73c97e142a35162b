"""
Exceptions raised by mixdisc

Library code raises these; only the command-line layer turns them into
exit codes. Each class carries the exit code the CLI reports for it.
"""

from typing import Any, Optional

from mixdisc.models.suite import ExitCodeEnum


class MixdiscError(Exception):
    """Base class for every error raised by the package."""

    exit_code = ExitCodeEnum.FAILURE


class NumericalFailure(MixdiscError):
    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class NotPositiveDefinite(MixdiscError):
    def __init__(self, message: str, pivot_index: Optional[int] = None):
        super().__init__(message)
        self.pivot_index = pivot_index


class BasisNotOrthonormal(MixdiscError):
    pass


class NotUnitVector(MixdiscError):
    pass


class DimensionTooLarge(MixdiscError):
    def __init__(self, n: int, cap: int):
        super().__init__(f"dimension {n} exceeds the cap of {cap}")
        self.n = n
        self.cap = cap


class HypothesisViolated(MixdiscError):
    def __init__(self, message: str, row: Optional[int] = None):
        super().__init__(message)
        self.row = row


class NoConvergence(MixdiscError):
    """The scaling solver hit its iteration cap.

    ``result`` holds the best iterate seen (lowest trace residual).
    """

    exit_code = ExitCodeEnum.NO_CONVERGENCE

    def __init__(self, message: str, result: Any = None, residual: Optional[float] = None):
        super().__init__(message)
        self.result = result
        self.residual = residual


class PropertyViolation(MixdiscError):
    exit_code = ExitCodeEnum.PROPERTY_VIOLATION

    def __init__(self, message: str, values: tuple = ()):
        super().__init__(message)
        self.values = values


class ParseError(MixdiscError):
    exit_code = ExitCodeEnum.PARSE_ERROR


class UnknownSuite(MixdiscError):
    exit_code = ExitCodeEnum.PARSE_ERROR


class StorageError(MixdiscError):
    pass
