"""Exception hierarchy shared by all modules."""


class OrderCxError(Exception):
    """Base class for every error raised by this package."""


class BudgetExceeded(OrderCxError):
    """An enumeration would exceed its configured size budget."""


class FieldError(OrderCxError):
    """Invalid field parameters or mixed-field operands."""


class InverseOfZero(FieldError, ZeroDivisionError):
    pass


class DimensionMismatch(OrderCxError):
    pass


class NotCanonical(OrderCxError):
    """A serialized subspace basis is not in reduced row echelon form."""


class PosetError(OrderCxError):
    """Malformed order relation (cycle, duplicate label, bad interval)."""


class NoUpperBound(PosetError):
    pass


class NoLowerBound(PosetError):
    pass


class NonUniqueJoin(PosetError):
    """Upper bounds exist but there is no least one."""


class NonUniqueMeet(PosetError):
    pass


class NotGraded(PosetError):
    pass


class NotExtendable(OrderCxError):
    def __init__(self, message, face=None):
        super().__init__(message)
        self.face = face


class NotGeometric(OrderCxError):
    pass


class NotThick(OrderCxError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness


class NotModularGeometric(OrderCxError):
    pass


class FactorizationCheckFailed(OrderCxError):
    pass


class BooleanFactorPresent(OrderCxError):
    pass


class QTooSmall(OrderCxError):
    pass


class InternalCriterionMismatch(OrderCxError):
    """The two weak-independence evaluations disagreed."""


class VerificationFailed(OrderCxError):
    pass


class ArtifactError(OrderCxError):
    """Unreadable or inconsistent JSON artifact."""


class InvalidConfiguration(OrderCxError):
    """A grid that is not a (d+1) x 3 array of atoms with distinct rows."""
