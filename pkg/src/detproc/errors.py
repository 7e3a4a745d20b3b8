"""Error taxonomy shared by all modules.

Two families, mirroring the CLI exit-code contract: input/domain problems
(ValueError side, exit 1) and numerical-convergence problems (RuntimeError
side, exit 2).
"""

from __future__ import annotations

__all__ = [
    "DomainError",
    "GeometryError",
    "SingularityError",
    "ConvergenceError",
    "DivergenceError",
    "StepCollapseError",
]


class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class GeometryError(ValueError):
    """Contour geometry cannot be realized (overlapping or invalid circles)."""


class SingularityError(ValueError):
    """A drift evaluation hit an exact particle collision."""


class ConvergenceError(RuntimeError):
    """An iterative numerical procedure failed to meet its tolerance."""


class DivergenceError(ConvergenceError):
    """No finite truncation point could be established for an integral."""


class StepCollapseError(ConvergenceError):
    """Adaptive substepping shrank below the floor (near-collision stiffness)."""
