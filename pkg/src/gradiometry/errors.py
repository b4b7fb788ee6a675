"""Exception types raised across the package."""


class GradiometryError(Exception):
    """Base class for computation errors (CLI exit status 2)."""


class FieldPointInsideBody(GradiometryError):
    def __init__(self, point, message=None):
        self.point = tuple(float(c) for c in point)
        super().__init__(message or f"field point {self.point} lies inside or on a body")


class StepTooLargeForGeometry(GradiometryError):
    pass


class DegenerateRange(GradiometryError):
    pass


class QuadratureNotConverged(GradiometryError):
    def __init__(self, message, estimate=None, error=None):
        self.estimate = estimate
        self.error = error
        super().__init__(message)


class PotentialEvaluationFailed(GradiometryError):
    pass


class MissingNoiseDensity(GradiometryError):
    pass


class ConfigError(ValueError):
    """Invalid or incomplete configuration (CLI exit status 1).

    ``key`` names the offending config entry.
    """

    def __init__(self, key, message):
        self.key = key
        super().__init__(f"{key}: {message}")
