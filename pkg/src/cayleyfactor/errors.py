"""Exception hierarchy shared by every module of the package."""


class CayleyFactorError(Exception):
    """Base class for all errors raised by cayleyfactor."""


class SizeLimitError(CayleyFactorError):
    """A group or closure would exceed the configured order cap."""


class PreconditionError(CayleyFactorError, ValueError):
    """An operation was called on inputs outside its contract."""


class NotDecomposableError(CayleyFactorError):
    """The group is not the internal direct product of a 2-group and an odd-order group."""


class OutOfScopeError(CayleyFactorError):
    """The input lies outside the Q x H family handled by the construction."""


class NotConnectedError(CayleyFactorError):
    """The generating set does not generate the whole group."""


class CompletionFailed(CayleyFactorError):
    """Cross-edge completion gave up; the caller should use the exact solver."""


class BudgetExceeded(CayleyFactorError):
    """The exact solver hit its node-expansion budget before reaching a verdict."""


class ParseError(CayleyFactorError, ValueError):
    """A group specification could not be parsed."""

    def __init__(self, message: str, position: int = 0):
        super().__init__(f"{message} (at position {position})")
        self.position = position
