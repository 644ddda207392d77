"""Exception hierarchy shared by the solver modules."""

from __future__ import annotations


class MDVSPError(Exception):
    """Base class for all errors raised by this package."""


class InstanceFormatError(MDVSPError, ValueError):
    """Raised when instance text cannot be parsed."""


class InvalidInstanceError(MDVSPError, ValueError):
    """Raised when an instance violates its structural invariants."""

    def __init__(self, violations):
        self.violations = list(violations)
        detail = "; ".join(str(v) for v in self.violations)
        super().__init__(f"invalid instance: {detail}")


class InfeasibleError(MDVSPError):
    """No feasible circulation exists; ``trip`` is a witness trip node."""

    def __init__(self, message: str, trip: int | None = None):
        super().__init__(message)
        self.trip = trip


class DecompositionError(MDVSPError, ValueError):
    """A flow solution could not be split into vehicle blocks."""


class UnrepairableSubtourError(MDVSPError):
    """Every repair option of a subtour is ineligible."""

    def __init__(self, message: str, subtour=None):
        super().__init__(message)
        self.subtour = subtour


class NoPerfectMatchingError(MDVSPError, ValueError):
    """The weight matrix admits no perfect matching of finite weight."""


class ModelError(MDVSPError, ValueError):
    """Invalid model manipulation (unknown arc, bad path constraint)."""


class SolutionImportError(MDVSPError, ValueError):
    """A solver solution file is malformed or violates the model."""


class BackendError(MDVSPError):
    """The solver backend failed or reported a non-optimal status."""


class BackendUnavailableError(BackendError):
    """The configured solver backend cannot be started."""


class BackendTimeoutError(BackendError):
    """The solver backend exceeded its time limit."""
