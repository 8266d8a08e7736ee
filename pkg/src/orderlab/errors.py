"""Exception types shared across orderlab."""


class OrderlabError(Exception):
    pass


class InvalidArgument(OrderlabError, ValueError):
    """Malformed input: group mismatch, bad dimension, invalid distribution..."""


class UnsupportedOperation(OrderlabError, NotImplementedError):
    pass


class InsufficientWindow(OrderlabError, ValueError):
    """A configuration is not defined everywhere an evaluation needs it."""


class ConsistencyError(OrderlabError, RuntimeError):
    """An internal cross-check failed (e.g. a count that should be stable grew)."""
