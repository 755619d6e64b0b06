"""Exception hierarchy.

``ConfigError`` subclasses map to CLI exit code 2, ``PreconditionError``
subclasses (a mathematical hypothesis is violated) map to exit code 3.
"""


class HyperlabError(Exception):
    pass


class ConfigError(HyperlabError, ValueError):
    pass


class PreconditionError(HyperlabError, ValueError):
    pass


class AllZeroInput(PreconditionError):
    pass


class DimensionMismatch(ConfigError):
    pass


class NotSquarefree(ConfigError):
    pass


class Duplicate(ConfigError):
    pass


class NotCoprime(ConfigError):
    pass


class RationalTheta(ConfigError):
    pass


class UnknownId(ConfigError):
    pass


class IncompatibleGrids(HyperlabError, ValueError):
    pass


class NotCommuting(PreconditionError):
    pass


class NumericalBreakdown(PreconditionError, ArithmeticError):
    pass


class NoNontrivialCanonical(PreconditionError):
    pass


class SearchBoundExceeded(HyperlabError, LookupError):
    pass


class Overflow(HyperlabError, OverflowError):
    pass
