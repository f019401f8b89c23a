"""Exception hierarchy shared by every abkit module."""


class AbkitError(Exception):
    """Base class for all abkit failures."""


class InvalidInputError(AbkitError, ValueError):
    """A precondition on the arguments was violated."""


class UnsupportedConfigurationError(InvalidInputError):
    pass


class NumericError(AbkitError, ArithmeticError):
    """A numerical procedure failed to reach its tolerance.

    ``best_estimate`` and ``achieved`` carry whatever the procedure had when
    it gave up, so callers can still report something useful.
    """

    def __init__(self, message, best_estimate=None, achieved=None, time_reached=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.achieved = achieved
        self.time_reached = time_reached


class QuadratureError(NumericError):
    pass


class SingularityError(NumericError):
    """Two charges coincided; ``time_reached`` names the offending time."""


class DegenerateOverlapError(NumericError):
    pass


class BoundaryLeakError(NumericError):
    def __init__(self, message, leak):
        super().__init__(message, achieved=leak)
        self.leak = leak


class RegimeError(AbkitError):
    """A validity condition of the semiclassical packet treatment failed."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ConfigError(AbkitError):
    """Run configuration could not be parsed or validated."""

    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
