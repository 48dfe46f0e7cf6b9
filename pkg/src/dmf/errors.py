from typing import Optional


class DmfError(Exception):
    """Base class for every error raised by the dmf package."""


class FieldError(DmfError, ValueError):
    """Division by zero or elements from incompatible fields."""


class PrecisionExhausted(DmfError):
    """An element is indistinguishable from 0 at its current precision."""


class BudgetExceeded(DmfError):
    def __init__(self, message: str, estimate: Optional[int] = None):
        if estimate is not None:
            message = f"{message} (estimated size {estimate})"
        super().__init__(message)
        self.estimate = estimate


class NoRootError(DmfError):
    """No root exists in any supported extension."""


class ModeError(DmfError):
    """lambda requested from a coefficient field in plain F_q(t) mode."""


class LatticeError(DmfError, ValueError):
    """Singular basis, unit level ideal or a non-lattice input."""


class SpecError(DmfError, ValueError):
    def __init__(self, message: str, location: Optional[str] = None):
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class NormalFormError(DmfError):
    """A coefficient that the ring presentation forces to vanish did not reduce to 0."""
