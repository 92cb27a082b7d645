"""Exception hierarchy.

Negative *answers* (not cospectral, no PST, invalid PTE pair, ...) are returned
as falsy values by the predicates; exceptions are reserved for bad input and
for internal certification failures.
"""


class ChainforgeError(Exception):
    """Base class for every error raised by this package."""


# poly
class NonRealRoots(ChainforgeError):
    pass


class DegreeOrder(ChainforgeError):
    pass


class DuplicateAbscissa(ChainforgeError):
    pass


class RepeatedPole(ChainforgeError):
    pass


class IrrationalPole(ChainforgeError):
    pass


# chain
class IndexOutOfRange(ChainforgeError, IndexError):
    pass


class NonPositiveCoupling(ChainforgeError):
    pass


class DegreeDrop(ChainforgeError):
    pass


# opsbuild
class InterlacingViolation(ChainforgeError):
    pass


class CertificationFailure(ChainforgeError):
    """A construction finished but its own certificate did not verify."""


# cospec
class InfeasiblePosition(ChainforgeError):
    pass


class NotCospectralInput(ChainforgeError):
    pass


class PoleCollision(ChainforgeError):
    pass


# pst
class IrrationalSpectrum(ChainforgeError):
    pass


class InfeasibleSpectrum(ChainforgeError):
    pass


class NotEnoughSlack(ChainforgeError):
    pass


# pte
class SizeMismatch(ChainforgeError):
    pass


class NotPeriodicCospectral(ChainforgeError):
    pass


class WrongPosition(ChainforgeError):
    pass


class WrongClass(ChainforgeError):
    pass


class ParityMismatch(ChainforgeError):
    pass
