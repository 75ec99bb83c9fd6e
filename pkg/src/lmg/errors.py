"""Exception types shared across the package."""


class LmgError(Exception):
    """Base class for all package-specific errors."""


class InvalidParameterError(LmgError, ValueError):
    """A parameter fails its domain constraints (e.g. non-half-integer J)."""


class BasisMismatchError(LmgError, ValueError):
    """Two objects tagged with incompatible bases were combined."""


class UnsupportedCaseError(LmgError, ValueError):
    """Parameter combination matches none of the transfer cases i-iv."""


class InapplicableBoundError(LmgError, ValueError):
    """A variational bound formula was invoked outside its validity domain."""


class CutoffOverflowError(LmgError, RuntimeError):
    """Phonon population leaked into the highest Fock level beyond tolerance."""


class ConfigError(LmgError, ValueError):
    """A run configuration failed schema validation."""
