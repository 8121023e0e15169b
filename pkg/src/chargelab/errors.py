"""Exception hierarchy shared by every module."""


class ChargeLabError(ValueError):
    """Base class for rejected inputs."""


class UniverseMismatch(ChargeLabError):
    """Operands live in different universes."""


class PeriodLimitExceeded(ChargeLabError):
    """A result would need a period above the configured guard."""


class InvariantViolation(ChargeLabError):
    """A value breaks a structural invariant (negative weight, bad family, ...)."""


class NotRepresentable(ChargeLabError):
    """The requested object has no exact finite description here."""


class ParseError(ChargeLabError):
    """Malformed text form.  ``line`` and ``column`` are 1-based when known."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        elif column is not None:
            where = f"column {column}: "
        super().__init__(where + message)
