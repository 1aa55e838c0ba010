"""Round-trip latency of transport topologies and S1/X2 delay budgets.

RTT model::

    rtt(size) = radio_access_rtt + 2 * sum(processing + propagation + size * 8 / rate)

per hop, with delays in ms, rates in Mbit/s and size in bytes. Queueing and
jitter are not modelled.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, field, replace
from typing import Sequence

from .errors import BandWarning, InvalidInputError

PING_SIZES_BYTES = (10, 100, 1000, 1460)
REFERENCE_SIZE_BYTES = 1460


class Technology(str, enum.Enum):
    LTE_SIMPLIFIED = "LteSimplified"
    LTE_FULL = "LteFull"
    HSPA_PLUS = "HspaPlus"


class Segment(str, enum.Enum):
    """Where a hop sits relative to the S1 budget split."""

    RADIO = "radio"
    ACCESS = "access"
    TRANSPORT = "transport"
    CORE = "core"


class Interface(str, enum.Enum):
    S1 = "S1"
    X2 = "X2"


@dataclass(frozen=True)
class Hop:
    label: str
    processing_delay_ms: float = 0.0
    link_rate_mbps: float = 1000.0
    propagation_delay_ms: float = 0.0
    segment: Segment | None = None

    def __post_init__(self):
        if self.link_rate_mbps <= 0:
            raise InvalidInputError(f"hop {self.label!r}: link rate must be > 0")
        if self.processing_delay_ms < 0 or self.propagation_delay_ms < 0:
            raise InvalidInputError(f"hop {self.label!r}: delays must be >= 0")
        if self.segment is not None:
            object.__setattr__(self, "segment", Segment(self.segment))

    def serialization_ms(self, size_bytes: float) -> float:
        return size_bytes * 8.0 / (self.link_rate_mbps * 1e6) * 1e3

    def one_way_ms(self, size_bytes: float) -> float:
        return self.processing_delay_ms + self.propagation_delay_ms + self.serialization_ms(size_bytes)


@dataclass(frozen=True)
class TopologyPath:
    name: str
    hops: tuple[Hop, ...]
    radio_access_rtt_ms: float = 0.0
    technology: Technology = Technology.LTE_FULL

    def __post_init__(self):
        object.__setattr__(self, "hops", tuple(self.hops))
        if not self.hops:
            raise InvalidInputError(f"path {self.name!r} needs at least one hop")
        if self.radio_access_rtt_ms < 0:
            raise InvalidInputError(f"path {self.name!r}: radio access RTT must be >= 0")

    def without(self, *labels: str) -> "TopologyPath":
        return replace(self, hops=tuple(h for h in self.hops if h.label not in labels))


def rtt(path: TopologyPath, packet_size_bytes: float) -> float:
    if packet_size_bytes < 0:
        raise InvalidInputError("packet size must be >= 0")
    return path.radio_access_rtt_ms + 2.0 * math.fsum(h.one_way_ms(packet_size_bytes) for h in path.hops)


def rtt_slope_ms_per_byte(path: TopologyPath) -> float:
    return 2.0 * math.fsum(8.0 / (h.link_rate_mbps * 1e6) * 1e3 for h in path.hops)


@dataclass(frozen=True)
class RttSweep:
    path: str
    sizes: tuple[float, ...]
    rtt_ms: tuple[float, ...]

    @property
    def spread_ms(self) -> float:
        """RTT of the largest packet minus RTT of the smallest."""
        return self.rtt_ms[-1] - self.rtt_ms[0]

    @property
    def mean_ms(self) -> float:
        return math.fsum(self.rtt_ms) / len(self.rtt_ms)


def rtt_sweep(path: TopologyPath, sizes: Sequence[float] = PING_SIZES_BYTES) -> RttSweep:
    if not sizes:
        raise InvalidInputError("sizes must be non-empty")
    sizes = tuple(sorted(sizes))
    return RttSweep(path.name, sizes, tuple(rtt(path, s) for s in sizes))


@dataclass(frozen=True)
class BudgetRule:
    s1_one_way_ms: float = 10.0
    s1_access_share_ms: float = 5.0
    s1_transport_share_ms: float = 5.0
    x2_one_way_ms: float = 20.0
    x2_over_s1_fraction: float = 0.04
    control_over_user_fraction: float = 0.02

    def __post_init__(self):
        if not math.isclose(self.s1_access_share_ms + self.s1_transport_share_ms, self.s1_one_way_ms):
            raise InvalidInputError("access and transport shares must add up to the S1 budget")


@dataclass(frozen=True)
class BudgetReport:
    interface: Interface
    passed: bool
    one_way_ms: float
    limit_ms: float
    per_segment_ms: dict[str, float]
    per_hop_ms: tuple[tuple[str, float], ...]
    max_cascaded_links: int | None
    violations: tuple[str, ...] = field(default=())


def max_cascaded_links(transport_share_ms: float, per_link_delay_ms: float) -> int:
    """Number of identical transport links that fit in the transport share."""
    if per_link_delay_ms <= 0:
        raise InvalidInputError("per-link delay must be > 0")
    return int(math.floor(transport_share_ms / per_link_delay_ms + 1e-9))


def _counted_hops(path, interface):
    counted = []
    for h in path.hops:
        if h.segment is None:
            raise InvalidInputError(f"path {path.name!r}: hop {h.label!r} has no segment tag")
        if h.segment in (Segment.ACCESS, Segment.TRANSPORT):
            counted.append(h)
    if not counted:
        raise InvalidInputError(f"path {path.name!r} has no access or transport hops for {interface.value}")
    return counted


def validate_budget(path: TopologyPath, rule: BudgetRule | None = None,
                    interface: Interface = Interface.S1,
                    reference_size_bytes: float = REFERENCE_SIZE_BYTES) -> BudgetReport:
    """Check the one-way access + transport delay against the S1 or X2 budget.

    Radio and core hops are outside the eNB-to-EPC interface and are not
    counted. S1 also enforces the per-segment shares; X2 only the total.
    """
    rule = rule or BudgetRule()
    interface = Interface(interface)
    hops = _counted_hops(path, interface)
    per_hop = tuple((h.label, h.one_way_ms(reference_size_bytes)) for h in hops)
    per_segment = {Segment.ACCESS.value: 0.0, Segment.TRANSPORT.value: 0.0}
    for h, (_, d) in zip(hops, per_hop):
        per_segment[h.segment.value] += d
    one_way = math.fsum(d for _, d in per_hop)
    violations = []
    if interface is Interface.S1:
        limit = rule.s1_one_way_ms
        if per_segment["access"] > rule.s1_access_share_ms:
            violations.append(f"access {per_segment['access']:.3f} ms > {rule.s1_access_share_ms:g} ms")
        if per_segment["transport"] > rule.s1_transport_share_ms:
            violations.append(
                f"transport {per_segment['transport']:.3f} ms > {rule.s1_transport_share_ms:g} ms")
    else:
        limit = rule.x2_one_way_ms
    if one_way > limit:
        violations.insert(0, f"one-way {one_way:.3f} ms > {limit:g} ms")
    transport = [d for h, (_, d) in zip(hops, per_hop) if h.segment is Segment.TRANSPORT]
    cascade = None
    if transport:
        cascade = max_cascaded_links(rule.s1_transport_share_ms, math.fsum(transport) / len(transport))
    return BudgetReport(interface, not violations, one_way, limit, per_segment, per_hop,
                        cascade, tuple(violations))


def x2_path(s1_a: TopologyPath, s1_b: TopologyPath, cross_connect: str) -> TopologyPath:
    """eNB-to-eNB path through a shared cross-connect node (usually the IPsec GW).

    Takes ``s1_a`` up to and including the cross-connect hop, then ``s1_b``'s
    hops before it in reverse. Radio and core hops are dropped.
    """
    def leg(path):
        labels = [h.label for h in path.hops]
        if cross_connect not in labels:
            raise InvalidInputError(f"path {path.name!r} does not pass {cross_connect!r}")
        i = labels.index(cross_connect)
        return [h for h in path.hops[: i + 1] if h.segment not in (Segment.RADIO, Segment.CORE)]

    a, b = leg(s1_a), leg(s1_b)
    hops = a + list(reversed(b[:-1]))
    return TopologyPath(f"{s1_a.name}<->{s1_b.name}", tuple(hops), 0.0, s1_a.technology)


@dataclass(frozen=True)
class AncillaryBandwidth:
    x2_mbps: float
    s1_mme_mbps: float
    warnings: tuple[str, ...] = ()


X2_BAND = (0.03, 0.05)
CONTROL_BAND = (0.01, 0.03)


def ancillary_bandwidth(s1u_mbps: float, x2_fraction: float = 0.04,
                        control_fraction: float = 0.02) -> AncillaryBandwidth:
    """X2 and S1-MME capacity sized as fractions of the S1-U capacity."""
    if s1u_mbps < 0 or x2_fraction < 0 or control_fraction < 0:
        raise InvalidInputError("bandwidth and fractions must be >= 0")
    notes = []
    for label, value, (lo, hi) in (("X2", x2_fraction, X2_BAND),
                                   ("control plane", control_fraction, CONTROL_BAND)):
        if not lo <= value <= hi:
            notes.append(f"{label} fraction {value:g} outside usual band [{lo:g}, {hi:g}]")
    for msg in notes:
        warnings.warn(msg, BandWarning, stacklevel=2)
    return AncillaryBandwidth(s1u_mbps * x2_fraction, s1u_mbps * control_fraction, tuple(notes))


LTE_RADIO_RTT_MS = 15.0
HSPA_RADIO_RTT_MS = 27.3


def _h(label, proc, rate, prop, seg):
    return Hop(label, proc, rate, prop, Segment(seg))


# Per-hop figures are calibration constants: they reproduce RTT spreads of
# 1 / 12 / 21 ms between 10 and 1460 byte pings and a full-LTE mean RTT of
# 60% of the HSPA+ mean over the standard ping sizes.
def default_profiles() -> dict[Technology, TopologyPath]:
    simplified = TopologyPath("lte_simplified", (
        _h("air interface", 0.0, 25.0, 0.0, "radio"),
        _h("fiber access", 0.05, 1000.0, 0.1, "access"),
        _h("EPC", 0.5, 1000.0, 0.0, "core"),
        _h("server LAN", 0.1, 1000.0, 0.0, "core"),
    ), radio_access_rtt_ms=LTE_RADIO_RTT_MS, technology=Technology.LTE_SIMPLIFIED)
    full = TopologyPath("lte_full", (
        _h("air interface", 0.0, 25.0, 0.0, "radio"),
        _h("microwave access", 0.2, 8.0, 0.05, "access"),
        _h("access router", 0.3, 1000.0, 0.05, "access"),
        _h("aggregation router", 0.3, 1000.0, 0.5, "transport"),
        _h("IPsec GW", 0.5, 6.0, 0.0, "transport"),
        _h("firewall", 0.5, 5.5, 0.0, "core"),
        _h("core router", 0.3, 1000.0, 1.0, "transport"),
        _h("EPC", 0.5, 1000.0, 0.0, "core"),
        _h("server LAN", 0.1, 1000.0, 0.0, "core"),
    ), radio_access_rtt_ms=LTE_RADIO_RTT_MS, technology=Technology.LTE_FULL)
    hspa = TopologyPath("hspa_plus", (
        _h("air interface", 0.0, 2.0, 0.0, "radio"),
        _h("microwave access", 0.2, 8.0, 0.05, "access"),
        _h("access router", 0.3, 1000.0, 0.05, "access"),
        _h("aggregation router", 0.3, 1000.0, 0.5, "transport"),
        _h("RNC", 2.0, 3.6, 0.0, "transport"),
        _h("core router", 0.3, 1000.0, 1.0, "transport"),
        _h("SGSN", 0.5, 1000.0, 0.0, "core"),
        _h("GGSN", 0.5, 1000.0, 0.0, "core"),
        _h("server LAN", 0.1, 1000.0, 0.0, "core"),
    ), radio_access_rtt_ms=HSPA_RADIO_RTT_MS, technology=Technology.HSPA_PLUS)
    return {Technology.LTE_SIMPLIFIED: simplified, Technology.LTE_FULL: full, Technology.HSPA_PLUS: hspa}

