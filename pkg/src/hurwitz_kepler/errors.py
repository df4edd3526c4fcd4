"""Exception types shared across the package.

The CLI maps these to its stable exit codes: config errors -> 2,
separability -> 3, violated QES preconditions -> 4, bracket failures -> 5.
"""

__all__ = [
    "HurwitzKeplerError",
    "ConfigError",
    "SeparabilityError",
    "QesPreconditionError",
    "QesClosureError",
    "BracketError",
    "AccuracyError",
]


class HurwitzKeplerError(Exception):
    """Base class for package-specific failures."""


class ConfigError(HurwitzKeplerError):
    """Malformed or inconsistent run configuration."""


class SeparabilityError(HurwitzKeplerError):
    """A spherical-chart solve was requested for a non-separable model."""


class QesPreconditionError(HurwitzKeplerError, ValueError):
    """A quasi-exact-solvability parameter constraint is violated."""


class QesClosureError(HurwitzKeplerError):
    """The polynomial ansatz space fails to close under the Hamiltonian."""


class BracketError(HurwitzKeplerError):
    """No eigenvalue-matching sign change inside the requested bracket."""


class AccuracyError(HurwitzKeplerError):
    """Grid refinement failed to converge to the requested tolerance."""
