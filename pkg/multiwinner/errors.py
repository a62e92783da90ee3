"""
Custom exception hierarchy for committee elections.

Provides detailed error types so the CLI can map failures to stable exit codes.
"""


class MultiwinnerError(Exception):
    """Base exception for all library errors"""

    pass


class ParseError(MultiwinnerError):
    """Malformed election, instance or counting-function text"""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message)
        self.line = line

    def __str__(self) -> str:
        message = super().__str__()
        if self.line is None:
            return message
        return f"line {self.line}: {message}"


class InvalidInputError(MultiwinnerError):
    """A value violates its type invariants"""

    pass


class PreconditionError(MultiwinnerError):
    """
    An algorithm was called outside its domain.

    For example greedy on a non-concave counting function.
    """

    pass


class CapExceededError(MultiwinnerError):
    """An enumeration budget would be exceeded"""

    def __init__(self, message: str, required: int | None = None, cap: int | None = None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class InconsistentResultError(MultiwinnerError):
    """Two independent computations disagree"""

    pass
