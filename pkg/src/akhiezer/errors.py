"""Exception hierarchy shared by every module of the package."""


class AkhiezerError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(AkhiezerError, ValueError):
    """An argument lies outside the domain of the operation."""


class DegenerateGeometryError(DomainError):
    """The two-interval set produces a modulus too close to 0 or 1."""


class PartitionError(DomainError):
    """Zeros do not respect the gap partition xi_k <= alpha, beta <= xi_{k+1}."""


class PoleError(AkhiezerError, ArithmeticError):
    """Evaluation point too close to a pole."""


class ConvergenceError(AkhiezerError, ArithmeticError):
    """An iterative procedure exceeded its iteration cap."""


class ConditioningError(AkhiezerError, ArithmeticError):
    """A polynomial fit failed its held-out residual check."""


class BranchMismatchError(AkhiezerError, ArithmeticError):
    """No branch / sign assignment produced a Pell-exact pair."""


class ZeroCountError(AkhiezerError, ArithmeticError):
    """Fewer real zeros were isolated than the polynomial degree."""


class CertificationError(AkhiezerError):
    """Analytic and oracle solutions disagree beyond tolerance.

    ``payload`` carries both polynomials (and the measured gaps) so the
    failure can be inspected after the fact.
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload or {}


class ConsistencyError(AkhiezerError, ArithmeticError):
    """Two independent evaluations of the same closed form disagree."""
