"""Solve reports returned by every iterative and direct solver."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

TERMINATIONS = ("converged", "max_iterations", "stagnated", "diverged", "error")


@dataclass
class SolveReport:
    """Outcome of one solver run.

    ``residual_history`` starts with the residual of the initial iterate;
    for solvers that check every step it therefore has ``iterations + 1``
    entries.  Solvers with a residual-check stride record only the sampled
    values.  ``detail`` carries solver-specific diagnostics (per-update
    audits, inner-iteration counts, objective histories, ...).
    """

    solution: np.ndarray
    iterations: int
    residual_history: list[float]
    final_residual: float
    wall_time_seconds: float
    termination: str
    detail: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.termination not in TERMINATIONS:
            raise ValueError(f"unknown termination {self.termination!r}")
        if self.iterations < 0 or self.wall_time_seconds < 0:
            raise ValueError("iterations and wall time must be nonnegative")
        if not self.residual_history:
            raise ValueError("residual_history must be nonempty")
        if self.final_residual != self.residual_history[-1]:
            raise ValueError("final_residual must equal the last history entry")

    @property
    def converged(self) -> bool:
        return self.termination == "converged"

    def summary(self) -> dict:
        """JSON-friendly summary without the dense solution payload."""
        return {
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "termination": self.termination,
            "wall_time_seconds": self.wall_time_seconds,
        }
