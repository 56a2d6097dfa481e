"""Exception and warning types raised across the package."""


class EhRelayError(Exception):
    """Base class for all package errors."""


class NumericError(EhRelayError):
    """A numerical procedure could not produce a trustworthy value."""


class NonConvergent(NumericError):
    """Adaptive quadrature exhausted its subdivision budget."""


class InvalidDomain(EhRelayError, ValueError):
    """An argument lies outside the domain of a function."""


class InvalidConfig(EhRelayError, ValueError):
    """A configuration violates one of its invariants."""


class DegenerateTheta(InvalidConfig):
    """The power-splitting ratio leaves a rate undefined (theta == 1)."""


class DegenerateRates(NumericError):
    """The first-hop signal and interference rates coincide."""


class InvalidMode(InvalidConfig):
    """Contradictory interference-mode settings."""


class OutOfRange(EhRelayError, ValueError):
    """A requested sweep point is not present in a result."""


class ZeroProbability(NumericError):
    """A probability underflowed to zero where a logarithm is needed."""


class ConfigParseError(EhRelayError, ValueError):
    """A configuration document could not be parsed."""


class NonUnimodal(UserWarning):
    """The outage-versus-theta curve has more than one local minimum."""


class DegenerateRange(UserWarning):
    """All plotted values are equal; the axis was padded."""
