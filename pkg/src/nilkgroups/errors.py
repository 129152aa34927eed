"""Exception types shared across the package."""


class NotAGroup(ValueError):
    """A multiplication table fails one of the group axioms."""


class OrderLimitExceeded(ValueError):
    """A construction would produce a group larger than the configured cap."""


class BadParams(ValueError):
    """Unknown family or parameters outside the supported range."""


class SearchBudgetExceeded(RuntimeError):
    """An exhaustive enumeration hit its configured cap.

    Raised instead of returning a silently truncated result.
    """


class ParseError(ValueError):
    """Malformed textual input. ``position`` is a 0-based character offset,
    ``line``/``column`` are 1-based when known."""

    def __init__(self, message, position=None, line=None, column=None):
        self.position = position
        self.line = line
        self.column = column
        self.bare_message = message
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        elif position is not None:
            where.append(f"position {position}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
