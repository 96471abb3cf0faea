"""Exception hierarchy shared by every module of the package."""


class InjQuiverError(Exception):
    """Base class for all errors raised by injquiver."""


class ShapeMismatch(InjQuiverError, ValueError):
    pass


class ValidationError(InjQuiverError, ValueError):
    """An input object violates one of its invariants."""


class BudgetExceeded(InjQuiverError):
    """An enumeration would visit more candidates than the configured budget."""


class UnboundedPathSet(InjQuiverError):
    pass


class NotATree(InjQuiverError):
    pass


class UnsupportedQuiver(InjQuiverError):
    pass


class UnsupportedTail(InjQuiverError):
    pass


class NotInjective(InjQuiverError):
    pass


DEFAULT_BUDGET = 2**16
