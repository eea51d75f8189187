"""Exception hierarchy shared by every nctap module."""


class NctapError(Exception):
    """Base class for all errors raised by nctap."""


class NotPrime(NctapError, ValueError):
    pass


class NotIrreducible(NctapError, ValueError):
    pass


class NotPrimitive(NctapError, ValueError):
    pass


class DivisionByZero(NctapError, ZeroDivisionError):
    pass


class IndexOutOfRange(NctapError, IndexError):
    pass


class DegreeTooSmall(NctapError, ValueError):
    """Extension degree m is smaller than the block length n."""


class RankDeficientH(NctapError, ValueError):
    pass


class BudgetExceeded(NctapError, RuntimeError):
    """An exhaustive enumeration would exceed the configured budget."""


class CycleDetected(NctapError, ValueError):
    pass


class UnknownLink(NctapError, KeyError):
    pass


class DimensionMismatch(NctapError, ValueError):
    pass


class PreconditionViolated(NctapError, ValueError):
    pass


class ParameterOutOfRange(NctapError, ValueError):
    pass


class InvalidQuery(NctapError, ValueError):
    pass


class ConfigError(NctapError, ValueError):
    pass
