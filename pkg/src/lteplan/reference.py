"""Published 1800 MHz / 20 MHz reference link budgets and their printed results.

The scenarios are the inputs; ``PRINTED`` holds the derived rows exactly as
published (two-decimal rounding), used by golden comparisons.
"""

from __future__ import annotations

from .linkbudget import (
    ChannelModel,
    Direction,
    LinkBudgetScenario,
    Mcs,
    MimoScheme,
    Modulation,
    Morphology,
)
from .propagation import CLUTTER_OFFSETS_DB, PropagationModelParams

FREQUENCY_MHZ = 1800.0
MOBILE_HEIGHT_M = 1.5

BASE_HEIGHTS_M = {
    Morphology.DENSE_URBAN: 25.0,
    Morphology.URBAN: 30.0,
    Morphology.SUBURBAN: 40.0,
    Morphology.RURAL: 50.0,
}

# per morphology: channel model, UL SINR, DL SINR, UL/DL interference margin,
# penetration loss, shadow sigma, area coverage probability, shadow margin
_MORPH = {
    Morphology.DENSE_URBAN: (ChannelModel.ETU3, -4.19, -5.37, 0.89, 2.72, 19.0, 11.7, 0.95, 9.43),
    Morphology.URBAN: (ChannelModel.ETU3, -4.19, -5.37, 0.89, 2.72, 15.0, 9.4, 0.95, 8.04),
    Morphology.SUBURBAN: (ChannelModel.ETU120, -2.33, -4.94, 1.46, 3.13, 11.0, 7.2, 0.95, 5.99),
    Morphology.RURAL: (ChannelModel.EVA120, -2.20, -4.43, 2.71, 3.74, 8.0, 6.2, 0.90, 1.87),
}

SHORT_NAMES = {
    Morphology.DENSE_URBAN: "du",
    Morphology.URBAN: "urban",
    Morphology.SUBURBAN: "suburb",
    Morphology.RURAL: "rural",
}

# (morphology, direction) -> printed E, J, M, R, U, radius
PRINTED = {
    (Morphology.DENSE_URBAN, Direction.UL): (7.44, 7.44, -134.13, -149.74, 128.74, 0.47),
    (Morphology.DENSE_URBAN, Direction.DL): (15.21, 31.71, -130.61, -127.89, 131.16, 0.55),
    (Morphology.URBAN, Direction.UL): (7.44, 7.44, -134.13, -149.74, 134.13, 0.87),
    (Morphology.URBAN, Direction.DL): (15.21, 31.71, -130.61, -127.89, 136.56, 1.02),
    (Morphology.SUBURBAN, Direction.UL): (7.44, 7.44, -132.26, -147.31, 137.76, 2.13),
    (Morphology.SUBURBAN, Direction.DL): (15.21, 31.71, -130.18, -127.05, 141.77, 2.78),
    (Morphology.RURAL, Direction.UL): (7.44, 7.44, -132.14, -145.93, 143.50, 5.64),
    (Morphology.RURAL, Direction.DL): (15.21, 31.71, -129.67, -125.93, 147.77, 7.54),
}
PRINTED_ROWS = ("subcarrier_power_dbm", "eirp_per_subcarrier_dbm", "receiver_sensitivity_dbm",
                "min_reception_strength_dbm", "mapl_db", "radius_km")


def reference_scenario(morphology: Morphology, direction: Direction) -> LinkBudgetScenario:
    chan, sinr_ul, sinr_dl, im_ul, im_dl, pen, sigma, area, shadow = _MORPH[morphology]
    name = f"{SHORT_NAMES[morphology]}_{direction.value.lower()}"
    common = dict(
        morphology=morphology, direction=direction, system_bandwidth_mhz=20.0,
        channel_model=chan, indoor_penetration_loss_db=pen, shadow_std_db=sigma,
        area_coverage_prob=area, shadow_margin_db=shadow, name=name,
    )
    if direction is Direction.UL:
        return LinkBudgetScenario(
            max_total_tx_power_dbm=23.0, allocated_rb=3, rb_to_distribute_power=3,
            sinr_db=sinr_ul, rx_noise_figure_db=2.3, mimo_scheme=MimoScheme.ONE_BY_TWO,
            cell_edge_rate_kbps=128.0, mcs=Mcs(Modulation.QPSK, 0.20),
            rx_antenna_gain_dbi=17.0, rx_cable_loss_db=0.5,
            target_load=0.75, interference_margin_db=im_ul, **common,
        )
    return LinkBudgetScenario(
        max_total_tx_power_dbm=46.0, allocated_rb=19, rb_to_distribute_power=100,
        sinr_db=sinr_dl, rx_noise_figure_db=7.0, mimo_scheme=MimoScheme.TWO_BY_TWO_SFBC,
        cell_edge_rate_kbps=512.0, mcs=Mcs(Modulation.QPSK, 0.12),
        tx_antenna_gain_dbi=17.0, tx_cable_loss_db=0.5,
        target_load=0.90, interference_margin_db=im_dl, **common,
    )


def reference_scenarios() -> list[LinkBudgetScenario]:
    """All eight columns, morphology-major, UL before DL."""
    return [reference_scenario(m, d) for m in Morphology for d in (Direction.UL, Direction.DL)]


def reference_propagation(morphology: Morphology,
                          clutter_offset_db: float | None = None) -> PropagationModelParams:
    if clutter_offset_db is None:
        clutter_offset_db = CLUTTER_OFFSETS_DB[morphology]
    return PropagationModelParams(FREQUENCY_MHZ, BASE_HEIGHTS_M[morphology],
                                  MOBILE_HEIGHT_M, clutter_offset_db)
