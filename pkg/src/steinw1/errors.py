"""Exception hierarchy."""


class SteinW1Error(Exception):
    """Base class for all library errors."""


class ParameterError(SteinW1Error, ValueError):
    """Invalid family parameter; the message names the violated constraint."""


class SupportError(SteinW1Error, ValueError):
    """Evaluation requested outside the open support interval."""


class ConditionError(SteinW1Error, ValueError):
    """Standardization residuals exceed tolerance and no override was given."""


class SingularSystemError(SteinW1Error, ZeroDivisionError):
    """w*p vanishes at some atom, the weight system cannot be solved."""


class NoClosedFormError(SteinW1Error, LookupError):
    """No tabulated closed form exists for the requested family/pair."""


class DivergentSupError(SteinW1Error, ArithmeticError):
    """A numeric supremum diverged on the evaluation grid."""


class InfeasibleGridError(SteinW1Error, ValueError):
    """A construction-grid feasibility condition failed (named, with index)."""


class QuadratureBudgetError(SteinW1Error, ArithmeticError):
    """Adaptive quadrature could not reach tolerance within its budget."""


class TruncationError(SteinW1Error, MemoryError):
    """Tail truncation impossible within the atom-count cap."""
