"""Exception hierarchy shared by the library and the CLI."""


class DiamondError(Exception):
    """Base class for all errors raised by this package."""


class SizeError(DiamondError, ValueError):
    """Problem too large for exhaustive subset enumeration."""


class InstanceParseError(DiamondError, ValueError):
    """Malformed instance file; the message names the offending field."""


class InvariantViolation(DiamondError, AssertionError):
    """A bound or theorem that must hold did not; indicates a bug."""


class SimulationAssertionError(InvariantViolation):
    """A Monte Carlo sample broke a hard invariant.

    ``instance`` holds the JSON-serialisable offending channel.
    """

    def __init__(self, message, instance=None):
        super().__init__(message)
        self.instance = instance
