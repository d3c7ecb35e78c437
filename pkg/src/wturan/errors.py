"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class CapacityError(RuntimeError):
    """An exhaustive search would exceed its configured size guard.

    ``best`` carries the best partial answer found before the guard tripped,
    when the operation has one.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class FormatError(ValueError):
    """A text file could not be parsed. ``line`` is 1-based when known."""

    def __init__(self, message, line=None, source=None):
        where = ""
        if source is not None:
            where += f"{source}:"
        if line is not None:
            where += f"{line}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line = line
        self.source = source
