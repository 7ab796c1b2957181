"""Exception hierarchy shared by all dwgpe modules.

The CLI maps these onto process exit codes, so new error conditions should
reuse one of the classes below rather than raising bare built-ins.
"""


class DwgpeError(Exception):
    """Base class for all package errors."""


class DomainError(DwgpeError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class UsageError(DwgpeError, ValueError):
    """An operation was called in a way that violates its contract."""


class GridMismatchError(UsageError):
    """Two fields that must share a grid live on different grids."""


class ConfigError(DwgpeError, ValueError):
    """A run configuration file is malformed or inconsistent."""


class PotentialValidationError(DwgpeError):
    """The potential failed one of the double-well hypotheses."""


class SolverError(DwgpeError, RuntimeError):
    """An eigenvalue solve failed to converge or returned inconsistent data."""


class ModelError(DwgpeError, RuntimeError):
    """Computed quantities violate a structural property of the model
    (e.g. the ground doublet is not separated from the rest of the spectrum)."""


class IntegrationError(DwgpeError, RuntimeError):
    """Time propagation failure detected mid-run (e.g. norm drift)."""

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time


class SeparatrixError(DwgpeError, RuntimeError):
    """The analytic imbalance formula was requested on the separatrix,
    where no closed form exists; use the ODE integrator instead."""


class ConsistencyError(DwgpeError, RuntimeError):
    """Internally inconsistent two-mode parameters (degenerate initial data)."""
