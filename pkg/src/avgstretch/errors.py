"""Exception types shared across the package."""


class InvalidInputError(ValueError):
    """Raised when an operation receives inputs outside its contract."""


class DisconnectedGraphError(RuntimeError):
    """Raised when an evaluation requires a connected graph and got none."""


class ParseError(ValueError):
    """Raised on malformed input files; carries a 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = "line %d: %s" % (line, message)
        super().__init__(message)
        self.line = line
