"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain a function supports."""


class TruncationError(RuntimeError):
    """A Fock expansion could not be truncated within the hard cap."""


class UnreachableTargetError(ValueError):
    """No amplitude in the supported range reaches the requested mean photon number."""


class DegenerateEnsembleError(ValueError):
    """The two signal states are (numerically) identical."""
