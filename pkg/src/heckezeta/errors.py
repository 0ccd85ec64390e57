"""Exception hierarchy.

Domain errors (bad inputs, poles, unreachable bounds) and certification
failures are kept apart because the command line maps them to different
exit codes.
"""

from __future__ import annotations


class HeckeZetaError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(HeckeZetaError, ValueError):
    """An argument lies outside the domain of the requested quantity."""


class PoleAt1(DomainError):
    """The Riemann zeta function was asked for its value at s = 1."""


class PoleProximity(DomainError):
    """Some shifted argument 2s + n falls (numerically) on the pole of zeta."""


class PrecisionExhausted(HeckeZetaError):
    """No admissible summation parameters reach the requested accuracy."""


class BoundUnreachable(DomainError):
    """The error bound stays above the target even at the maximal size."""

    def __init__(self, message: str, n: int, achieved) -> None:
        super().__init__(message)
        self.n = n
        self.achieved = achieved


class CertificationError(HeckeZetaError):
    """Base class for failures to produce a certificate."""


class Undetermined(CertificationError):
    """The sign of the zeta function could not be certified at a point."""


class BracketFailure(CertificationError):
    """No initial bracket with opposite certified signs was found."""


class PatternMismatch(CertificationError):
    """A structural identity of the transfer matrices failed to hold."""


class IllConditioned(CertificationError):
    """A numerical probe produced an unreliable fit."""
