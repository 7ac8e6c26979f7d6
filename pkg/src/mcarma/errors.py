"""Exception hierarchy shared across the package.

Validation problems (bad shapes, bad parameters, malformed files) and
numerical problems (solver failures, blow-ups, divergent integrals) are kept
on separate branches so the CLI can map them to distinct exit codes.
"""


class McarmaError(Exception):
    """Base class for all package errors."""


class ValidationError(McarmaError, ValueError):
    """Invalid input: violated precondition, bad shape, malformed file."""


class ShapeError(ValidationError):
    """Dimension mismatch among coefficient blocks or arrays."""


class NumericError(McarmaError, RuntimeError):
    """Numerical failure: blow-up, eigen-solver failure, divergence."""


class MeasureError(NumericError):
    """Levy-measure integral violates the finite-variance assumption."""


class FitError(NumericError):
    """Statistical fit failed (rank deficiency, non-convergence, degeneracy)."""


class RestrictionError(ValidationError):
    """Distributional compatibility restriction violated."""


class SolverError(NumericError):
    """Root-finder or linear solver found no admissible solution."""


class PipelineError(McarmaError):
    """Estimation pipeline failure, labelled with the stage that raised it."""

    def __init__(self, stage: str, message: str):
        self.stage = stage
        super().__init__(f"[stage: {stage}] {message}")
