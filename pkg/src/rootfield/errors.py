"""Shared exception types.

Domain and pole violations are ValueErrors so that bad inputs surface the
same way the standard library reports them; convergence failures are
RuntimeErrors because they depend on tolerances and iteration caps rather
than the input being malformed.
"""


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested exactly at a pole."""


class ConvergenceError(RuntimeError):
    """An iteration failed to meet its tolerance within its budget."""


class SeriesDivergenceError(ConvergenceError):
    """A series expansion blew up.

    ``partial`` holds the last finite partial sum so callers can still use
    it as a refinement seed.
    """

    def __init__(self, message, partial=None, terms=0):
        super().__init__(message)
        self.partial = partial
        self.terms = terms


class BasinEscapeError(ConvergenceError):
    """Newton iteration left the trust region around its seed."""
