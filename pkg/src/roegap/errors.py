"""Exception types shared across the package."""


class RoegapError(Exception):
    """Base class for all package errors."""


class EmptyComponent(RoegapError):
    """A component with zero points was supplied."""


class DisconnectedComponent(RoegapError):
    """An edge list does not connect all points of a component."""


class SpaceMismatch(RoegapError):
    """Two objects built over different space families were combined."""


class DimensionMismatch(RoegapError):
    """A vector does not match the component sizes of an operator."""


class SupportNotCovered(RoegapError):
    """An operator or translation has support outside the covered entourage."""


class NotGenerating(RoegapError):
    """A generator set fails to reach every element of the group."""


class NonSymmetricGenerators(RoegapError):
    """A generator set is not closed under inverses."""


class InvalidFiltration(RoegapError):
    """Filtration parameters are not nested (non-divisible sizes)."""


class BudgetExceeded(RoegapError):
    """A requested family exceeds the configured point-count budget."""


class NotPrime(RoegapError):
    """A parameter that must be prime is not."""


class EmptySystem(RoegapError):
    """A translation system with no members was supplied."""


class OutOfRange(RoegapError):
    """A numeric parameter lies outside its admissible range."""


class InvalidExponent(RoegapError):
    """An exponent outside [1, infinity) was supplied."""


class ConfigError(RoegapError):
    """A run configuration file or flag could not be parsed."""
