"""Exception taxonomy shared across the package.

Every error carries an ``exit_code`` so the command line front end can map
failures onto its documented process exit codes without inspecting types:

* 2 -- malformed input (parsing, validation, domain violations)
* 3 -- a value left the representable numeric range
* 4 -- an iterative solver failed (lost bracket, no sign change, blow-up)
"""

from __future__ import annotations


class SpecdetError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class InputError(SpecdetError, ValueError):
    """Malformed or out-of-domain input."""

    exit_code = 2


class PotentialParseError(InputError):
    """Potential JSON could not be parsed; ``position`` is the byte offset."""

    def __init__(self, message: str, position: int | None = None):
        super().__init__(message)
        self.position = position


class PotentialValidationError(InputError):
    """Potential JSON parsed but a field is invalid; ``field`` names it."""

    def __init__(self, message: str, field: str):
        super().__init__(message)
        self.field = field


class DomainError(InputError):
    """An argument lies outside a function's documented domain."""


class RangeError(SpecdetError, OverflowError):
    """A quantity exceeds the largest representable binary64 value."""

    exit_code = 3

    def __init__(self, message: str, bound: float | None = None):
        super().__init__(message)
        self.bound = bound


class TruncationError(SpecdetError, ValueError):
    """A truncated sum cannot meet its accuracy target; carries the estimate."""

    exit_code = 3

    def __init__(self, message: str, estimate: float):
        super().__init__(message)
        self.estimate = estimate


class SolverError(SpecdetError, RuntimeError):
    """An iterative solver failed; ``payload`` holds diagnostic data."""

    exit_code = 4

    def __init__(self, message: str, payload: object = None):
        super().__init__(message)
        self.payload = payload


class BracketError(SolverError):
    """An eigenvalue bracket failed to capture its target; carries the window."""


class GeometryError(SolverError):
    """Lattice geometry is inconsistent with the requested construction."""
