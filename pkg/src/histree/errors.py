"""Exception types shared across the package."""


class HistreeError(Exception):
    """Base class for all errors raised by this package."""


class InputError(HistreeError):
    """A caller-supplied value is outside the operation's contract."""


class ParseError(InputError):
    """A textual input could not be parsed; carries the source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{line}:{column}: {message}")
        self.line = line
        self.column = column


class CapacityError(HistreeError):
    """A configured resource limit was exceeded; carries partial progress."""

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
