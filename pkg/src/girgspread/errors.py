"""Exception types shared across the package."""


class UsageError(ValueError):
    """Caller passed arguments outside an operation's domain."""


class DataError(ValueError):
    """Malformed input data, e.g. a graph file that does not parse."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ResourceError(MemoryError):
    """A request that would need an unreasonable amount of memory."""

    def __init__(self, message, attempted=None):
        super().__init__(message)
        self.attempted = attempted
