"""Exception hierarchy shared by all modules."""


class OIError(Exception):
    """Base class for every error raised by this package."""


class UsageError(OIError, ValueError):
    """A caller violated an operation's preconditions."""


class RankError(UsageError):
    pass


class OrderError(UsageError):
    pass


class ParseError(UsageError):
    def __init__(self, message, text=None, pos=None):
        if text is not None and pos is not None:
            message = f"{message} at position {pos} in {text!r}"
        super().__init__(message)
        self.text = text
        self.pos = pos


class UnsupportedError(OIError):
    """The operation needs an enumerable (finite) carrier."""


class SizeError(OIError):
    """Enumeration would exceed the configured element cap."""
