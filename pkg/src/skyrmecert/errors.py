"""Exception hierarchy shared by all modules."""


class CertificationError(Exception):
    """Base class for every error raised on the certified path."""


class DomainError(CertificationError, ValueError):
    pass


class DivisionByIntervalContainingZero(CertificationError, ZeroDivisionError):
    pass


class SingularSystem(CertificationError):
    pass


class InconsistentOverdetermined(CertificationError):
    pass


class DenominatorMayVanish(CertificationError):
    pass


class CanonicalFormViolation(CertificationError):
    pass


class CancellationFailure(CertificationError):
    pass


class BoundaryPole(CertificationError, ZeroDivisionError):
    pass


class ZeroDenominator(CertificationError, ZeroDivisionError):
    pass


class BoundNotAchieved(CertificationError):
    def __init__(self, message, value=None):
        super().__init__(message)
        self.value = value


class ContractionFails(CertificationError):
    def __init__(self, message, slack=None):
        super().__init__(message)
        self.slack = slack


class EnvelopeOrderViolated(CertificationError):
    pass


class DenominatorSignUncertified(CertificationError):
    pass


class UnsupportedExponent(CertificationError, ValueError):
    pass


class MissingCertificates(CertificationError):
    pass


class NewtonDivergence(CertificationError):
    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)


class JacobianSingular(CertificationError):
    pass


class LinearSystemSingular(CertificationError):
    pass


class TargetVanishes(CertificationError):
    pass


class DualRouteMismatch(CertificationError):
    """Two independent constructions of the same exact object disagree."""


class DegreeBoundViolated(CertificationError):
    pass
