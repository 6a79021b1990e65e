"""
Exceptions raised by ThabitSolver
"""


class SolverError(Exception):
    """Base class for all solver errors"""


class PrecisionExhausted(SolverError, ArithmeticError):
    """A certified comparison could not be decided below the precision cap"""


class NotBracketed(SolverError, ValueError):
    """The polynomial has no certified real root greater than 1"""


class UnsupportedNumber(SolverError, ValueError):
    """The algebraic number is not in the height catalogue"""


class DomainError(SolverError, ValueError):
    """A numeric argument is outside the operation's domain"""


class AmbiguousMidpoint(SolverError, ArithmeticError):
    """The enclosure straddles a half-integer, so the nearest integer is unknown"""


class MuDegenerate(SolverError):
    """The inhomogeneous term vanishes; use the Legendre criterion instead"""


class CertificationError(SolverError, ArithmeticError):
    """An internal consistency check failed"""


class ConfigurationError(SolverError, ValueError):
    """Invalid run configuration"""
