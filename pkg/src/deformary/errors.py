"""Exception hierarchy shared by every module."""


class DeformaryError(Exception):
    """Base class for all library errors."""


class SpecMismatch(DeformaryError):
    pass


class NonUnit(DeformaryError, ZeroDivisionError):
    pass


class Singular(DeformaryError, ZeroDivisionError):
    pass


class NonUnitConstantTerm(NonUnit):
    pass


class VariableCollision(DeformaryError, ValueError):
    pass


class ReductionMismatch(DeformaryError, ValueError):
    pass


class GroupTooLarge(DeformaryError, ValueError):
    pass


class BadOrder(DeformaryError, ValueError):
    pass


class Inconsistent(DeformaryError, ValueError):
    pass


class Underdetermined(DeformaryError, ValueError):
    pass


class NotACocycle(DeformaryError, ValueError):
    pass


class NotAHomomorphism(DeformaryError, ValueError):
    pass


class UnsupportedFiltration(DeformaryError, ValueError):
    pass


class UnsupportedField(DeformaryError, ValueError):
    pass


class BudgetExceeded(DeformaryError, RuntimeError):
    pass


class UnknownMark(DeformaryError, KeyError):
    pass


class InvalidCertificate(DeformaryError, ValueError):
    pass


class CaseCharMismatch(DeformaryError, ValueError):
    pass


class InconsistentLedger(DeformaryError, ValueError):
    pass


class NoSolution(DeformaryError, ArithmeticError):
    pass


class SchemaError(DeformaryError, ValueError):
    """Malformed JSON input; ``path`` names the offending location."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path
