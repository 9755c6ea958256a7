"""Exception hierarchy shared by the whole package."""


class L0Error(Exception):
    """Base class for every error raised by l0tensor."""


class SpaceMismatch(L0Error, ValueError):
    pass


class DimensionMismatch(L0Error, ValueError):
    pass


class UnsupportedKinds(L0Error, ValueError):
    """Raised when no exact or certified route exists for a pair of norm kinds.

    The message always names the operation that refused the input.
    """

    def __init__(self, operation, detail=""):
        self.operation = operation
        msg = f"{operation}: unsupported norm-kind combination"
        if detail:
            msg += f" ({detail})"
        super().__init__(msg)


class Infeasible(L0Error, ValueError):
    pass


class InvalidDescriptor(L0Error, ValueError):
    pass


class NotAPartition(L0Error, ValueError):
    pass


class PreconditionFailed(L0Error, ValueError):
    pass


class InconsistentFamily(L0Error, ValueError):
    """A declared tail bound was contradicted by observed partial sums."""


class NotSummable(L0Error, ValueError):
    pass


class DocumentError(L0Error, ValueError):
    """Malformed or unresolvable work document; ``where`` locates the problem."""

    def __init__(self, message, where=None):
        self.where = where
        if where:
            message = f"{where}: {message}"
        super().__init__(message)
