"""Exception hierarchy shared across the package.

Everything derives from :class:`MallowsimError` so callers can catch the
package's failures in one clause.  Validation problems additionally subclass
``ValueError``; runaway-simulation guards subclass ``RuntimeError`` via
:class:`CapExceeded` (the CLI maps those to a dedicated exit code).
"""


class MallowsimError(Exception):
    """Base class for all errors raised by mallowsim."""


class NotABijection(MallowsimError, ValueError):
    """Sequence does not describe a bijection of {1, ..., n}."""


class DuplicateValue(MallowsimError, ValueError):
    """Input values were required to be distinct but are not."""


class TooLarge(MallowsimError, ValueError):
    """Exhaustive enumeration was requested beyond the supported size."""


class BadParameter(MallowsimError, ValueError):
    """A numeric parameter is outside its admissible range."""


class BadStatistic(MallowsimError, ValueError):
    """A requested statistic is unknown or not admissible for the given q."""


class Diverges(MallowsimError, ValueError):
    """An infinite product/series was requested where it does not converge."""


class CapExceeded(MallowsimError, RuntimeError):
    """A simulation exceeded its step cap (likely ill-chosen parameters)."""


class ExcursionTooLong(CapExceeded):
    """A single excursion exceeded the step cap before completing."""


class ReturnTooLong(CapExceeded):
    """A return time exceeded the step cap before the chain came back."""
