"""LTE radio network planning: link budgets, propagation, site dimensioning,
QoS mapping and scheduling, and transport latency budgets."""

from .errors import (
    BandWarning,
    ConvergenceError,
    InfeasibleScheduleError,
    InvalidInputError,
    ModelValidityWarning,
    NotFoundError,
    PlanningError,
    SaturationError,
)

__version__ = "0.1.0"

__all__ = [
    "BandWarning", "ConvergenceError", "InfeasibleScheduleError", "InvalidInputError",
    "ModelValidityWarning", "NotFoundError", "PlanningError", "SaturationError",
]
