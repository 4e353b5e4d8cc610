"""Exception types shared across the package."""


class InvalidArgument(ValueError):
    """Raised when an argument violates an operation's precondition."""


class ResourceLimit(RuntimeError):
    """Raised when an enumeration or search would exceed a configured bound."""

    def __init__(self, message, bound=None):
        super().__init__(message)
        self.bound = bound


class GraphParseError(InvalidArgument):
    """Malformed graph JSON; ``path`` points at the offending element."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
