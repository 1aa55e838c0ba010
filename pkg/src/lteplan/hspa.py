"""HSPA+ (2100 MHz, 5 MHz carrier) coverage models used as the LTE benchmark.

The default profile is a set of calibration constants, not measured data:

* ``dl_required_sinr_db`` places the last user count that still reaches
  200 m at 512 kbps per user on a 40 W PA at six users;
* ``dl_coupling_factor`` makes the fully loaded DL radius 55% of the
  unloaded one;
* ``ul_required_sinr_db`` makes the UL radius at 90% UL load equal the
  fully loaded single-user DL radius, so DL limits below that load.

``calibrate_profile`` re-derives all three from those targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .errors import InvalidInputError
from .linkbudget import THERMAL_NOISE_DBM_PER_HZ, Direction, interference_margin
from .propagation import PropagationModelParams, invert_radius


@dataclass(frozen=True)
class HspaConfig:
    pa_total_power_w: float = 40.0
    common_channel_overhead_fraction: float = 0.2
    carrier_bandwidth_mhz: float = 5.0
    carriers: int = 1
    chip_rate_hz: float = 3.84e6
    ul_load: float = 0.5
    dl_load: float = 1.0
    # propagation: urban 2100 MHz
    frequency_mhz: float = 2100.0
    base_height_m: float = 30.0
    mobile_height_m: float = 1.5
    clutter_offset_db: float = 0.0
    # downlink
    nodeb_antenna_gain_dbi: float = 17.0
    nodeb_cable_loss_db: float = 0.5
    ue_antenna_gain_dbi: float = 0.0
    ue_body_loss_db: float = 0.0
    ue_noise_figure_db: float = 7.0
    dl_reference_rate_kbps: float = 512.0
    dl_required_sinr_db: float = 8.5
    dl_coupling_factor: float = 0.8783
    # uplink
    ue_tx_power_dbm: float = 24.0
    nodeb_noise_figure_db: float = 2.5
    ul_required_sinr_db: float = -8.9
    # area
    indoor_penetration_loss_db: float = 15.0
    shadow_margin_db: float = 8.04

    def __post_init__(self):
        if self.pa_total_power_w <= 0:
            raise InvalidInputError("PA power must be > 0")
        if not 0.0 <= self.common_channel_overhead_fraction < 1.0:
            raise InvalidInputError("common channel overhead must lie in [0, 1)")
        if self.carriers < 1 or self.carrier_bandwidth_mhz <= 0:
            raise InvalidInputError("need at least one carrier of positive bandwidth")
        for name in ("ul_load", "dl_load"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise InvalidInputError(f"{name} must lie in [0, 1]")

    @property
    def propagation(self) -> PropagationModelParams:
        return PropagationModelParams(self.frequency_mhz, self.base_height_m,
                                      self.mobile_height_m, self.clutter_offset_db)

    @property
    def noise_floor_db(self) -> float:
        return THERMAL_NOISE_DBM_PER_HZ + 10.0 * math.log10(self.chip_rate_hz)


def per_user_power_dbm(cfg: HspaConfig, users: int) -> float:
    """Traffic power left after common channels, split evenly over ``users``."""
    if users < 1:
        raise InvalidInputError("users must be >= 1")
    watts = cfg.pa_total_power_w * (1.0 - cfg.common_channel_overhead_fraction) / users
    return 10.0 * math.log10(watts * 1000.0)


def dl_mapl(cfg: HspaConfig, users: int = 1, load: float | None = None,
            cell_edge_rate_kbps: float | None = None) -> float:
    """Downlink MAPL for one of ``users`` equal-power users at the cell edge.

    The required SINR scales linearly with the edge rate (low-SINR regime).
    """
    load = cfg.dl_load if load is None else load
    rate = cfg.dl_reference_rate_kbps if cell_edge_rate_kbps is None else cell_edge_rate_kbps
    if rate <= 0:
        raise InvalidInputError("cell edge rate must be > 0")
    sinr = cfg.dl_required_sinr_db + 10.0 * math.log10(rate / cfg.dl_reference_rate_kbps)
    eirp = per_user_power_dbm(cfg, users) + cfg.nodeb_antenna_gain_dbi - cfg.nodeb_cable_loss_db
    sensitivity = sinr + cfg.ue_noise_figure_db + cfg.noise_floor_db
    rmin = (sensitivity - cfg.ue_antenna_gain_dbi + cfg.ue_body_loss_db
            + interference_margin(load, cfg.dl_coupling_factor))
    return eirp - rmin - cfg.indoor_penetration_loss_db - cfg.shadow_margin_db


def ul_mapl(cfg: HspaConfig, load: float | None = None) -> float:
    """Uplink MAPL under the WCDMA noise rise; -inf at 100% load."""
    load = cfg.ul_load if load is None else load
    if not 0.0 <= load <= 1.0:
        raise InvalidInputError(f"load must lie in [0, 1], got {load}")
    if load >= 1.0:
        return -math.inf
    noise_rise = -10.0 * math.log10(1.0 - load)
    eirp = cfg.ue_tx_power_dbm + cfg.ue_antenna_gain_dbi - cfg.ue_body_loss_db
    sensitivity = cfg.ul_required_sinr_db + cfg.nodeb_noise_figure_db + cfg.noise_floor_db
    rmin = sensitivity - cfg.nodeb_antenna_gain_dbi + cfg.nodeb_cable_loss_db + noise_rise
    return eirp - rmin - cfg.indoor_penetration_loss_db - cfg.shadow_margin_db


def _radius(cfg, mapl_db):
    # an unclosable link (no pathloss budget left) has no coverage
    if not math.isfinite(mapl_db) or mapl_db <= 0:
        return 0.0
    return invert_radius(cfg.propagation, mapl_db)


def hspa_radius_vs_users(cfg: HspaConfig, users_grid, cell_edge_rate_kbps: float = 512.0
                         ) -> list[tuple[int, float]]:
    """Cell radius when the PA traffic power is shared by N edge users."""
    out = []
    for n in users_grid:
        n = int(n)
        if n < 1:
            raise InvalidInputError("users must be >= 1")
        out.append((n, _radius(cfg, dl_mapl(cfg, n, cell_edge_rate_kbps=cell_edge_rate_kbps))))
    return out


def max_users_within(series, radius_km: float) -> int:
    """Largest user count whose radius still reaches ``radius_km`` (0 if none)."""
    ok = [n for n, r in series if r >= radius_km]
    return max(ok) if ok else 0


def hspa_load_radius_curve(cfg: HspaConfig, load_grid) -> dict[Direction, list[tuple[float, float]]]:
    """Radius against load: UL through noise rise, DL through the coupling model."""
    loads = [float(x) for x in load_grid]
    for x in loads:
        if not 0.0 <= x <= 1.0:
            raise InvalidInputError(f"load must lie in [0, 1], got {x}")
    return {
        Direction.UL: [(x, _radius(cfg, ul_mapl(cfg, x))) for x in loads],
        Direction.DL: [(x, _radius(cfg, dl_mapl(cfg, 1, load=x))) for x in loads],
    }


def calibrate_profile(cfg: HspaConfig | None = None, users_at_edge: int = 6,
                      edge_radius_km: float = 0.2, dl_full_load_ratio: float = 0.55,
                      ul_crossover_load: float = 0.9) -> HspaConfig:
    """Re-derive the three calibration constants from their targets.

    The DL SINR puts ``users_at_edge`` halfway (in dB) between reaching and
    missing ``edge_radius_km``.
    """
    cfg = cfg or HspaConfig()
    slope = cfg.propagation.slope_db_per_decade
    # margin growth from load 0 to 1 that shrinks the radius to the target ratio
    delta_q = -slope * math.log10(dl_full_load_ratio)
    dl_coupling = 1.0 - 10.0 ** (-delta_q / 10.0)
    cfg = replace(cfg, dl_coupling_factor=dl_coupling)

    target_pl = cfg.propagation.fixed_part_db + slope * math.log10(edge_radius_km)
    half_step = 5.0 * math.log10((users_at_edge + 1) / users_at_edge)
    probe = dl_mapl(replace(cfg, dl_required_sinr_db=0.0), users_at_edge)
    cfg = replace(cfg, dl_required_sinr_db=probe - (target_pl + half_step))

    dl_ref = dl_mapl(cfg, 1, load=1.0)
    probe = ul_mapl(replace(cfg, ul_required_sinr_db=0.0), ul_crossover_load)
    return replace(cfg, ul_required_sinr_db=probe - dl_ref)
