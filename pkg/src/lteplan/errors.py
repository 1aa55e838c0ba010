"""Exception and warning types shared by the planning modules."""


class PlanningError(Exception):
    """Base class for every error raised by lteplan."""


class InvalidInputError(PlanningError, ValueError):
    """An argument or scenario field is outside its valid domain."""


class SaturationError(PlanningError, ArithmeticError):
    """A load model reached its pole (infinite interference margin)."""


class ConvergenceError(PlanningError, ArithmeticError):
    """A numerical solver could not bracket or reach its target."""


class InfeasibleScheduleError(PlanningError):
    """Cell capacity cannot carry the guaranteed bit rates it was given."""


class NotFoundError(PlanningError, KeyError):
    """A registry lookup failed."""

    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ModelValidityWarning(UserWarning):
    """An input lies outside the range an empirical model was fitted on."""


class BandWarning(UserWarning):
    """A ratio lies outside its customary planning band."""
