"""Exception hierarchy shared by all modules."""


class MultiwallError(Exception):
    """Base class for errors raised by this package."""


class PlanError(MultiwallError, ValueError):
    """A floor plan violates a geometric or referential invariant."""

    def __init__(self, message, wall_index=None):
        if wall_index is not None:
            message = f"wall {wall_index}: {message}"
        super().__init__(message)
        self.wall_index = wall_index


class DegeneratePathError(MultiwallError, ValueError):
    """Transmitter and receiver coincide."""


class ModelError(MultiwallError, ValueError):
    """Invalid model parameters, inputs or model selector."""


class RankDeficientError(MultiwallError, ValueError):
    """A least-squares design matrix does not have full column rank."""

    def __init__(self, message, column=None):
        super().__init__(message)
        self.column = column


class DataFormatError(MultiwallError, ValueError):
    """A data file could not be parsed; the message carries a line or key locator."""

    def __init__(self, message, location=None):
        if location is not None:
            message = f"{location}: {message}"
        super().__init__(message)
        self.location = location


class CalibrationError(MultiwallError, ValueError):
    """A fit could not be carried out or produced unphysical parameters."""
