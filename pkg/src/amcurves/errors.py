"""Exception hierarchy shared by every module of the package."""


class AMCurvesError(Exception):
    """Base class for all package errors."""


class ParameterError(AMCurvesError, ValueError):
    """Inputs violate a documented precondition."""


class InseparableError(ParameterError):
    """A linearized polynomial has zero constant coefficient a_0."""


class ValidationError(ParameterError):
    """A curve fails one of the membership clauses of its family."""


class InconsistencyError(AMCurvesError, RuntimeError):
    """An internal cross-check failed; signals a bug, not bad input."""


class DeskScaleLimit(AMCurvesError):
    """The requested computation exceeds the desk-scale guard."""


class BudgetExceeded(AMCurvesError):
    """A brute-force search would exceed its candidate budget."""
