"""Throughput, capacity and coverage dimensioning."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping

from .errors import InvalidInputError

SUBCARRIERS_PER_RB = 12
SYMBOLS_PER_MS = 14

# site area = k * R**2
OMNI_HEXAGON = 2.598
TRI_SECTOR_CLOVER = 1.949

# UE category peak-rate caps (Mbps)
CATEGORY_CAPS_MBPS = {
    "CAT3": {"DL": 102.0, "UL": 51.0},
    "CAT4": {"DL": 150.0, "UL": 75.0},
}

# absorbs float noise such as 19.49 / 1.949 = 9.999999999999998 before rounding
_EPS = 1e-9


def _floor(x):
    return int(math.floor(x + _EPS))


def _ceil(x):
    return int(math.ceil(x - _EPS))


@dataclass(frozen=True)
class ThroughputConfig:
    rb_count: int = 100
    modulation_bits: int = 6
    code_rate: float = 1.0
    layers: int = 1
    overhead_fraction: float = 0.0
    ue_category_cap_mbps: float | None = None
    subcarriers_per_rb: int = SUBCARRIERS_PER_RB
    symbols_per_ms: int = SYMBOLS_PER_MS

    def __post_init__(self):
        if self.rb_count < 1:
            raise InvalidInputError("rb_count must be >= 1")
        if self.modulation_bits not in (2, 4, 6):
            raise InvalidInputError("modulation_bits must be 2, 4 or 6")
        if not 0.0 < self.code_rate <= 1.0:
            raise InvalidInputError("code_rate must lie in (0, 1]")
        if self.layers not in (1, 2):
            raise InvalidInputError("layers must be 1 or 2")
        if not 0.0 <= self.overhead_fraction < 1.0:
            raise InvalidInputError("overhead_fraction must lie in [0, 1)")
        if self.ue_category_cap_mbps is not None and self.ue_category_cap_mbps <= 0:
            raise InvalidInputError("category cap must be positive")


def peak_phy_throughput(cfg: ThroughputConfig) -> float:
    """Peak physical-layer throughput in Mbps, capped by the UE category if set."""
    bits_per_ms = (cfg.rb_count * cfg.subcarriers_per_rb * cfg.symbols_per_ms
                   * cfg.modulation_bits * cfg.code_rate * cfg.layers
                   * (1.0 - cfg.overhead_fraction))
    raw = bits_per_ms / 1000.0  # kbit per ms == Mbit/s
    if cfg.ue_category_cap_mbps is not None:
        return min(raw, cfg.ue_category_cap_mbps)
    return raw


def normalize_throughput(measured_mbps: float, scheduling_rate: float) -> float:
    """Throughput a user would see if scheduled in every TTI."""
    if not 0.0 < scheduling_rate <= 1.0:
        raise InvalidInputError(f"scheduling rate must lie in (0, 1], got {scheduling_rate}")
    return measured_mbps / scheduling_rate


def spectral_efficiency(throughput_mbps: float, bandwidth_mhz: float) -> float:
    if bandwidth_mhz <= 0:
        raise InvalidInputError("bandwidth must be > 0")
    return throughput_mbps / bandwidth_mhz


def efficiency_gain(a: float, b: float) -> float:
    """Relative gain of ``a`` over ``b`` (0.34 means 34% better)."""
    if b <= 0:
        raise InvalidInputError("reference efficiency must be > 0")
    return a / b - 1.0


def subscribers_per_sector(avg_sector_throughput_mbps: float, loading: float,
                           peak_to_avg_margin: float, per_sub_kbps: float) -> int:
    """Busy-hour subscribers one sector carries.

    The sector throughput is derated by the planned loading, then divided by
    ``1 + peak_to_avg_margin`` to keep headroom for bursts.
    """
    if per_sub_kbps <= 0:
        raise InvalidInputError("per-subscriber rate must be > 0")
    if avg_sector_throughput_mbps < 0 or not 0.0 < loading <= 1.0 or peak_to_avg_margin < 0:
        raise InvalidInputError("throughput >= 0, loading in (0, 1] and margin >= 0 required")
    usable_kbps = avg_sector_throughput_mbps * 1000.0 * loading / (1.0 + peak_to_avg_margin)
    return _floor(usable_kbps / per_sub_kbps)


def coverage_site_count(area_km2: float, radius_km: float,
                        geometry_factor: float = TRI_SECTOR_CLOVER) -> int:
    if radius_km <= 0 or geometry_factor <= 0:
        raise InvalidInputError("radius and geometry factor must be > 0")
    if area_km2 < 0:
        raise InvalidInputError("area must be >= 0")
    return _ceil(area_km2 / (geometry_factor * radius_km ** 2))


def capacity_site_count(total_subscribers: int, subs_per_sector: int, sectors_per_site: int) -> int:
    if subs_per_sector <= 0 or sectors_per_site <= 0:
        raise InvalidInputError("subscribers per sector and sectors per site must be > 0")
    if total_subscribers < 0:
        raise InvalidInputError("subscriber count must be >= 0")
    return _ceil(total_subscribers / (subs_per_sector * sectors_per_site))


@dataclass(frozen=True)
class DimensioningInput:
    """Traffic profile plus area and subscribers per morphology.

    ``coverage_area_km2`` and ``subscribers`` are keyed by morphology name;
    every key of the area map needs a subscriber entry.
    """

    avg_sector_throughput_mbps: float
    coverage_area_km2: Mapping[str, float]
    subscribers: Mapping[str, int]
    dl_loading: float = 0.7
    peak_to_avg_margin: float = 0.2
    per_subscriber_busy_hour_kbps: float = 50.0
    sectors_per_site: int = 3
    geometry_factor: float = TRI_SECTOR_CLOVER

    def __post_init__(self):
        if self.avg_sector_throughput_mbps <= 0:
            raise InvalidInputError("average sector throughput must be > 0")
        if not 0.0 < self.dl_loading <= 1.0:
            raise InvalidInputError("DL loading must lie in (0, 1]")
        if self.peak_to_avg_margin < 0 or self.per_subscriber_busy_hour_kbps <= 0:
            raise InvalidInputError("margin must be >= 0 and per-subscriber rate > 0")
        if self.sectors_per_site < 1 or self.geometry_factor <= 0:
            raise InvalidInputError("sectors per site >= 1 and geometry factor > 0 required")
        missing = set(self.coverage_area_km2) - set(self.subscribers)
        if missing:
            raise InvalidInputError(f"no subscriber count for {sorted(missing)}")


@dataclass(frozen=True)
class MorphologyPlan:
    morphology: str
    cell_radius_km: float
    area_km2: float
    subscribers: int
    coverage_sites: int
    subscribers_per_sector: int
    capacity_sites: int
    required_sites: int

    @property
    def limited_by(self) -> str:
        return "capacity" if self.capacity_sites > self.coverage_sites else "coverage"


@dataclass(frozen=True)
class NetworkPlan:
    morphologies: list[MorphologyPlan] = field(default_factory=list)

    @property
    def coverage_sites(self) -> int:
        return sum(m.coverage_sites for m in self.morphologies)

    @property
    def capacity_sites(self) -> int:
        return sum(m.capacity_sites for m in self.morphologies)

    @property
    def required_sites(self) -> int:
        return sum(m.required_sites for m in self.morphologies)


def dimension_network(inp: DimensioningInput, radii_km: Mapping[str, float]) -> NetworkPlan:
    """Coverage and capacity site counts per morphology; the larger one wins."""
    sps = subscribers_per_sector(inp.avg_sector_throughput_mbps, inp.dl_loading,
                                 inp.peak_to_avg_margin, inp.per_subscriber_busy_hour_kbps)
    if sps < 1:
        raise InvalidInputError("traffic profile leaves no subscriber per sector")
    rows = []
    for morph, area in inp.coverage_area_km2.items():
        if morph not in radii_km:
            raise InvalidInputError(f"no cell radius for morphology {morph!r}")
        radius = radii_km[morph]
        cov = coverage_site_count(area, radius, inp.geometry_factor)
        subs = inp.subscribers[morph]
        cap = capacity_site_count(subs, sps, inp.sectors_per_site)
        rows.append(MorphologyPlan(str(morph), radius, area, subs, cov, sps, cap, max(cov, cap)))
    return NetworkPlan(rows)


@dataclass(frozen=True)
class EfficiencyComparison:
    lte_throughput_mbps: float
    lte_bandwidth_mhz: float
    hspa_normalized_mbps: float
    hspa_bandwidth_mhz: float
    lte_efficiency: float
    hspa_efficiency: float
    gain: float
    lte_subscribers_per_sector: int | None = None
    hspa_subscribers_per_sector: int | None = None


def compare_lte_hspa(lte_throughput_mbps: float = 33.0, lte_bandwidth_mhz: float = 20.0,
                     hspa_measured_mbps: float = 9.0, hspa_scheduling_rate: float = 0.73,
                     hspa_bandwidth_mhz: float = 10.0,
                     traffic: DimensioningInput | None = None,
                     hspa_round_mbps: int | None = 1) -> EfficiencyComparison:
    """Spectral-efficiency comparison of an LTE and a DC-HSPA+ sector.

    The HSPA+ throughput is normalized by its scheduling rate first and, by
    default, rounded to one decimal as the normalized value is quoted in
    practice (9 / 0.73 = 12.33 -> 12.3). Pass ``hspa_round_mbps=None`` to keep
    full precision. With ``traffic`` the subscriber capacity per sector is
    reported for both systems too.
    """
    hspa = normalize_throughput(hspa_measured_mbps, hspa_scheduling_rate)
    if hspa_round_mbps is not None:
        hspa = round(hspa, hspa_round_mbps)
    lte_eff = spectral_efficiency(lte_throughput_mbps, lte_bandwidth_mhz)
    hspa_eff = spectral_efficiency(hspa, hspa_bandwidth_mhz)
    lte_sps = hspa_sps = None
    if traffic is not None:
        args = (traffic.dl_loading, traffic.peak_to_avg_margin, traffic.per_subscriber_busy_hour_kbps)
        lte_sps = subscribers_per_sector(lte_throughput_mbps, *args)
        hspa_sps = subscribers_per_sector(hspa, *args)
    return EfficiencyComparison(lte_throughput_mbps, lte_bandwidth_mhz, hspa, hspa_bandwidth_mhz,
                                lte_eff, hspa_eff, efficiency_gain(lte_eff, hspa_eff),
                                lte_sps, hspa_sps)
