class TrefftzError(Exception):
    """Base class for package errors."""


class FamilyMismatchError(TrefftzError, TypeError):
    """A degree of freedom was applied to a function family it does not accept."""


class SchemeError(TrefftzError, ValueError):
    """No meaningful scheme can be built (degenerate matrix, bad pivot, bad input)."""


class SolverError(TrefftzError, RuntimeError):
    """The demonstration solve failed or produced an unacceptable residual."""
