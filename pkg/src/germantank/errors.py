"""Exception hierarchy shared by every module."""


class GermanTankError(ValueError):
    """Base class; subclasses ValueError so callers can catch either."""


class InvalidParameter(GermanTankError):
    pass


class EnumerationTooLarge(GermanTankError):
    pass


class InsufficientData(GermanTankError):
    pass


class SingularDesign(GermanTankError):
    """Raised when the least-squares problem has no unique solution."""


class DomainError(GermanTankError):
    pass


class UnknownExperiment(GermanTankError):
    pass
