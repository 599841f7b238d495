"""Exception types shared across the toolkit."""


class KreinError(Exception):
    """Base class for all toolkit errors."""


class DimensionMismatch(KreinError):
    """Operands have incompatible shapes or signatures."""


class NotNoncontraction(KreinError):
    """The operator fails the indefinite expansion inequality beyond tolerance."""


class NotIsometry(KreinError):
    """The operator does not preserve the indefinite product within tolerance."""


class NotPositive(KreinError):
    """A subspace expected to be nonnegative has a negative Gram direction."""


class NotGraph(KreinError):
    """A nominally nonnegative subspace has a rank-deficient plus-part projection."""


class DegenerateIntersection(KreinError):
    """A subspace intersection has unexpected dimension.

    Signals that the input was not maximal positive, or that numerical rank
    detection failed.
    """


class SingularPivot(KreinError):
    """The plus-block pivot of the graph transform is numerically singular."""


class NotFound(KreinError):
    """No maximal positive invariant subspace was found.

    This reports a search failure, not nonexistence.
    """


class Defective(KreinError):
    """Matrix is not numerically diagonalizable; the eigenvector oracle does not apply."""


class FileFormatError(KreinError):
    """A serialized operator document is malformed."""
