"""Exceptions shared across the package."""


class PlateError(Exception):
    """Base class for package-specific failures."""


class StructuralViolationError(PlateError):
    """A material model violates the structural positivity/symmetry conditions."""


class BoundViolationError(PlateError):
    """The sup-norm of the Hessian exceeded the configured a-priori ceiling."""

    def __init__(self, message, time=None, value=None):
        super().__init__(message)
        self.time = time
        self.value = value


class StepFailureError(PlateError):
    """A time step did not converge; the caller may retry with a smaller dt."""


class ConfigError(PlateError):
    """Run configuration could not be validated."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class AnalysisError(PlateError):
    """A requested post-processing step could not be completed."""


class IncompatibleRunsError(PlateError):
    """Two run directories cannot be compared (grids or checkpoints differ)."""
