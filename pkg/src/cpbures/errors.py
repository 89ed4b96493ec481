"""Exception types shared across the package."""


class CpBuresError(Exception):
    """Base class for all package errors."""


class NonSquareError(CpBuresError, ValueError):
    """A square matrix was required."""


class NonHermitianError(CpBuresError, ValueError):
    """Hermitian symmetry check failed."""


class NotPsdError(CpBuresError, ValueError):
    """Positive semidefiniteness check failed."""


class DimensionMismatchError(CpBuresError, ValueError):
    """Operands have incompatible dimensions."""


class ZeroMapError(CpBuresError, ValueError):
    """The (essentially) zero CP map is not admitted."""


class NotContractionError(CpBuresError, ValueError):
    """Operator norm exceeds the unit ball tolerance."""


class NotProbabilityError(CpBuresError, ValueError):
    """Input is not a probability vector."""


class NotUnitaryError(CpBuresError, ValueError):
    """Input matrix is not unitary within tolerance."""


class CenterNotScalarGramError(CpBuresError, ArithmeticError):
    """A central vector's Gram matrix deviates from a scalar multiple of I.

    For maps between full matrix algebras this is automatic, so hitting it
    signals a bug upstream rather than bad input.
    """


class ResidualNotCpError(CpBuresError, ArithmeticError):
    """The rigidity residual has a Choi eigenvalue below tolerance."""


class SolverFailureError(CpBuresError, RuntimeError):
    """The convex backend failed to produce a usable solution."""


class ParseError(CpBuresError, ValueError):
    """Input file is not valid JSON or does not match the schema."""


class ValidationError(CpBuresError, ValueError):
    """Input parsed but failed semantic validation (dims, positivity, ...)."""
