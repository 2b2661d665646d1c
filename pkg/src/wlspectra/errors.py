"""Exception types shared across the package."""


class WlspectraError(Exception):
    pass


class ParseError(WlspectraError, ValueError):
    """Malformed graph input. ``offset`` points at the offending byte/line."""

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)
        self.offset = offset


class SizeCapError(WlspectraError, ValueError):
    """A configured resource cap would be exceeded."""


class CompositionError(WlspectraError, ValueError):
    """A label identification would create a loop or mismatched arity."""


class SingularMapError(WlspectraError, ValueError):
    """A degree-inverse map was requested for a graph with an isolated vertex."""

    def __init__(self, vertex):
        super().__init__(f"isolated vertex {vertex} makes the degree matrix singular")
        self.vertex = vertex


class NumericError(WlspectraError, RuntimeError):
    """A numeric routine failed to converge or failed a residual check."""


class ContractError(WlspectraError, ValueError):
    """A documented precondition of an operation was violated."""
