"""Exception types shared across the toolkit.

The CLI maps these onto exit codes: :class:`FormatError` -> 3,
:class:`DomainError` -> 4. Plain ``OSError`` is left alone and maps to 2.
"""


class NetRenormError(Exception):
    pass


class FormatError(NetRenormError, ValueError):
    """Input text could not be parsed."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DomainError(NetRenormError, ValueError):
    """Input is well formed but outside an operation's domain."""


class InvalidCoverError(DomainError):
    def __init__(self, report):
        self.report = report
        super().__init__(f"invalid box cover: {report.message}")
