"""Exception hierarchy shared across the package."""

from __future__ import annotations


class PdwsimError(Exception):
    """Base class for every error raised by this package."""


class DomainError(PdwsimError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ParameterViolation(PdwsimError, ValueError):
    """A configured bound (such as the separation-rate limit) is not honored."""


class ConflictError(PdwsimError, RuntimeError):
    """Separation between the pair reached zero during integration."""

    def __init__(self, time_min: float):
        self.time_min = time_min
        super().__init__(f"separation reached zero at t={time_min:.6g} min")


class ScenarioError(PdwsimError, ValueError):
    """Base class for problems with external scenario documents."""


class ScenarioParseError(ScenarioError):
    """The scenario document could not be read or is not well-formed."""


class ScenarioValidationError(ScenarioError):
    """The scenario document is well-formed but violates an invariant."""
