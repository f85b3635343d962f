"""
Custom exceptions for limitgen.
"""


class LimitGenError(Exception):
    """Base exception for all limitgen errors."""
    pass


class OutOfRangeError(LimitGenError):
    """Raised when asking a finite set for an element past its end."""
    pass


class ProbeExhaustedError(LimitGenError):
    """Raised when an enumerator cannot certify an answer within the probe horizon."""
    pass


class IncompatibleCellSystemsError(LimitGenError):
    """Raised when two cell systems cannot be refined within the cell budget."""
    pass


class EmptySignatureError(LimitGenError):
    """Raised when an element lies in no language of a collection."""
    pass


class VerdictUnknownError(LimitGenError):
    """Raised when a finiteness verdict needed for a decision is Unknown."""
    pass


class DuplicateInWindowError(LimitGenError):
    """Raised when a window generator is fed an element it already holds."""
    pass


class SizeLimitError(LimitGenError):
    """Raised when an exhaustive construction is asked for an oversized input."""
    pass


class DecodeFailureError(LimitGenError):
    """Raised when an element is not a codeword of the coding generator."""
    pass


class CaseUndeterminedError(LimitGenError):
    """Raised when adaptive probing cannot certify any adversary case."""
    pass


class UnknownOrderError(LimitGenError):
    """Raised when almost-containment cannot be decided for some pair."""
    pass


class ConfigError(LimitGenError):
    """Raised when an experiment configuration fails validation."""

    def __init__(self, message: str, diagnostics=None):
        super().__init__(message)
        self.diagnostics = list(diagnostics or [])


class SerializationError(LimitGenError):
    """Raised when a JSON document cannot be turned into limitgen objects."""
    pass
