"""Exception types shared across the package."""


class InvalidInput(ValueError):
    """Input violates a documented precondition."""


class BudgetExceeded(RuntimeError):
    """A search ran out of its node or wall-clock budget before deciding.

    ``checkpoint`` holds a resumable state when the search supports it.
    """

    def __init__(self, message, stats=None, checkpoint=None):
        super().__init__(message)
        self.stats = stats or {}
        self.checkpoint = checkpoint


class CapExceeded(RuntimeError):
    """No answer at or below the requested cap."""


class EmbeddingFailure(RuntimeError):
    """A constructive embedding step could not be completed."""


class ParityError(InvalidInput):
    """A parity condition makes the request impossible."""


class FloorError(InvalidInput):
    """A length is below the smallest feasible value."""


class CapacityError(InvalidInput):
    """The request does not fit into the available room."""
