"""Exception hierarchy shared by every hflab module."""


class HflabError(Exception):
    """Base class for all hflab errors."""


class InvalidScalar(HflabError, ValueError):
    pass


class ConductorMismatch(HflabError, ValueError):
    pass


class ShapeError(HflabError, ValueError):
    pass


class NotAnAlgebra(HflabError):
    pass


class InvalidDatum(HflabError, ValueError):
    pass


class IncompleteDatum(HflabError):
    pass


class InvalidCocycle(HflabError):
    pass


class InvalidSubobject(HflabError):
    pass


class InvalidMorphism(HflabError):
    pass


class DatumMismatch(HflabError, ValueError):
    pass


class NotInBasis(HflabError, ValueError):
    pass


class SupportError(HflabError, ValueError):
    pass


class InsufficientData(HflabError, ValueError):
    pass


class BudgetExceeded(HflabError):
    """Raised by the BFS when its memory budget runs out.

    ``partial`` carries the ball sizes computed before the budget was hit.
    """

    def __init__(self, message, partial=()):
        super().__init__(message)
        self.partial = list(partial)


class TheoremViolation(HflabError):
    """A statement that must hold mathematically failed: an implementation bug
    or corrupted input, never an ordinary negative answer."""


class InternalInconsistency(TheoremViolation):
    pass
