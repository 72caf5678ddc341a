"""Exception types raised across the package."""


class DomainError(ValueError):
    """Argument outside the region where a formula is defined."""


class UntrappedStateError(ValueError):
    """Requested axial quantum number is not below the bound-state count."""


class TruncationCapError(RuntimeError):
    """Fourier truncation needed for a Mathieu solve exceeds the hard cap."""


class OrderingError(RuntimeError):
    """Characteristic values failed the interleaving check."""


class BoundaryLeakError(RuntimeError):
    """A finite-difference eigenvector is not localized inside its grid."""


class ConfigError(ValueError):
    """Invalid run configuration."""
