"""Exception types raised across the package."""


class GraphBellError(ValueError):
    """Base class for all input and contract violations."""


class LengthMismatchError(GraphBellError):
    pass


class TokenParseError(GraphBellError):
    pass


class NonHermitianError(GraphBellError):
    pass


class CapExceededError(GraphBellError):
    """A dense backend or exhaustive search would exceed its size cap."""


class MalformedInputError(GraphBellError):
    """A text document (graph file, CSV table, operator dump) could not be read."""
