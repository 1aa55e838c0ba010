"""Tuned COST231-Hata pathloss and its inversion to cell radius.

The model is the small/medium-city COST231-Hata line::

    PL(d) = 46.3 + 33.9 log10(f) - 13.82 log10(hb) - a(hm) + Cm
            + (44.9 - 6.55 log10(hb)) log10(d)
    a(hm) = (1.1 log10(f) - 0.7) hm - (1.56 log10(f) - 0.8)

with f in MHz, heights in m and d in km. Tuning happens only through the
per-morphology clutter offset Cm.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace

from .errors import InvalidInputError, ModelValidityWarning, SaturationError
from .linkbudget import (
    Direction,
    LinkBudgetScenario,
    Morphology,
    build_link_budget,
    calibrate_coupling_factor,
)

FREQ_RANGE_MHZ = (1500.0, 2000.0)
BASE_HEIGHT_RANGE_M = (4.0, 200.0)
MOBILE_HEIGHT_RANGE_M = (1.0, 10.0)
DISTANCE_RANGE_KM = (0.01, 20.0)

# Calibrated by inverting the 1800 MHz reference budgets against their radii.
CLUTTER_OFFSETS_DB = {
    Morphology.DENSE_URBAN: 3.0,
    Morphology.URBAN: 0.0,
    Morphology.SUBURBAN: -8.0,
    Morphology.RURAL: -15.0,
}


@dataclass(frozen=True)
class PropagationModelParams:
    frequency_mhz: float
    base_height_m: float
    mobile_height_m: float = 1.5
    clutter_offset_db: float = 0.0

    def __post_init__(self):
        if self.frequency_mhz <= 0 or self.base_height_m <= 0 or self.mobile_height_m <= 0:
            raise InvalidInputError("frequency and antenna heights must be positive")

    @property
    def mobile_correction_db(self) -> float:
        lf = math.log10(self.frequency_mhz)
        return (1.1 * lf - 0.7) * self.mobile_height_m - (1.56 * lf - 0.8)

    @property
    def slope_db_per_decade(self) -> float:
        return 44.9 - 6.55 * math.log10(self.base_height_m)

    @property
    def fixed_part_db(self) -> float:
        """Pathloss at 1 km."""
        return (46.3 + 33.9 * math.log10(self.frequency_mhz)
                - 13.82 * math.log10(self.base_height_m)
                - self.mobile_correction_db + self.clutter_offset_db)

    def validity_warnings(self) -> list[str]:
        out = []
        for label, value, (lo, hi), unit in (
            ("frequency", self.frequency_mhz, FREQ_RANGE_MHZ, "MHz"),
            ("base station height", self.base_height_m, BASE_HEIGHT_RANGE_M, "m"),
            ("mobile height", self.mobile_height_m, MOBILE_HEIGHT_RANGE_M, "m"),
        ):
            if not lo <= value <= hi:
                out.append(f"{label} {value:g} {unit} outside COST231-Hata range [{lo:g}, {hi:g}] {unit}")
        return out


def _warn(messages):
    for msg in messages:
        warnings.warn(msg, ModelValidityWarning, stacklevel=3)


def pathloss(params: PropagationModelParams, distance_km: float) -> float:
    if distance_km <= 0:
        raise InvalidInputError(f"distance must be > 0 km, got {distance_km}")
    _warn(params.validity_warnings())
    return params.fixed_part_db + params.slope_db_per_decade * math.log10(distance_km)


def invert_radius(params: PropagationModelParams, mapl_db: float) -> float:
    """Distance (km) at which the pathloss equals ``mapl_db``."""
    _warn(params.validity_warnings())
    d = 10.0 ** ((mapl_db - params.fixed_part_db) / params.slope_db_per_decade)
    if d < DISTANCE_RANGE_KM[0]:
        _warn([f"radius {d:.4g} km is below the model validity floor of {DISTANCE_RANGE_KM[0]} km"])
    return d


def calibrate_clutter(params: PropagationModelParams, known_radius_km: float,
                      mapl_db: float) -> float:
    """Clutter offset that puts the pathloss line through (radius, MAPL).

    Any clutter offset already set on ``params`` is ignored.
    """
    if known_radius_km <= 0:
        raise InvalidInputError("known radius must be > 0")
    base = replace(params, clutter_offset_db=0.0)
    return mapl_db - base.slope_db_per_decade * math.log10(known_radius_km) - base.fixed_part_db


def _radius_at_load(scenario, params, load):
    try:
        result = build_link_budget(scenario, params.slope_db_per_decade, load=load)
    except SaturationError:
        return 0.0
    return invert_radius(params, result.mapl_db)


def load_radius_curve(uplink: LinkBudgetScenario, downlink: LinkBudgetScenario,
                      params: PropagationModelParams, load_grid,
                      ul_coupling: float | None = None,
                      dl_coupling: float | None = None) -> dict[Direction, list[tuple[float, float]]]:
    """Cell radius against cell load for both directions.

    When a coupling factor is not given it is calibrated so that the
    scenario's own target load reproduces its interference margin; the curve
    then passes through the scenario's nominal radius. Loads at which the
    margin saturates give a radius of 0.
    """
    loads = [float(x) for x in load_grid]
    for x in loads:
        if not 0.0 <= x <= 1.0:
            raise InvalidInputError(f"load must lie in [0, 1], got {x}")
    curves = {}
    for scenario, coupling in ((uplink, ul_coupling), (downlink, dl_coupling)):
        if coupling is None:
            coupling = scenario.coupling_factor
        if coupling is None:
            coupling = calibrate_coupling_factor(scenario.target_load, scenario.interference_margin_db)
        loaded = replace(scenario, coupling_factor=coupling)
        curves[scenario.direction] = [(x, _radius_at_load(loaded, params, x)) for x in loads]
    return curves
