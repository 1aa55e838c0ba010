"""QCI registry, inter-user classes and QCI -> DSCP / microwave queue mapping."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from ..errors import InvalidInputError, NotFoundError

MW_QUEUES = 8


class ResourceType(str, enum.Enum):
    GBR = "GBR"
    NON_GBR = "NonGBR"


@dataclass(frozen=True)
class QciRecord:
    qci: int
    resource_type: ResourceType
    priority: int
    packet_delay_budget_ms: int
    packet_loss_rate: float
    dscp: int
    mw_queue: int
    service_sample: str = ""

    def __post_init__(self):
        if not 1 <= self.qci <= 9:
            raise InvalidInputError(f"QCI must lie in 1..9, got {self.qci}")
        expected = ResourceType.GBR if self.qci <= 4 else ResourceType.NON_GBR
        if ResourceType(self.resource_type) is not expected:
            raise InvalidInputError(f"QCI {self.qci} must be {expected.value}")
        if not 1 <= self.priority <= 9:
            raise InvalidInputError(f"QCI {self.qci}: priority must lie in 1..9")
        if self.packet_delay_budget_ms <= 0:
            raise InvalidInputError(f"QCI {self.qci}: packet delay budget must be > 0")
        if not 0.0 < self.packet_loss_rate < 1.0:
            raise InvalidInputError(f"QCI {self.qci}: packet loss rate must lie in (0, 1)")
        _check_marking(self.dscp, self.mw_queue, f"QCI {self.qci}")


@dataclass(frozen=True)
class TransportClass:
    """Non-bearer traffic (signalling, sync, O&M) carried on the transport network."""

    name: str
    dscp: int
    mw_queue: int
    description: str = ""

    def __post_init__(self):
        _check_marking(self.dscp, self.mw_queue, self.name)


@dataclass(frozen=True)
class UserClass:
    name: str
    arp: int
    qci: int
    scheduling_weight: int
    dscp_data: int
    dscp_signaling: int = 46
    dscp_voice: int = 46

    def __post_init__(self):
        if not 1 <= self.arp <= 15:
            raise InvalidInputError(f"{self.name}: ARP must lie in 1..15")
        if not 1 <= self.qci <= 9:
            raise InvalidInputError(f"{self.name}: QCI must lie in 1..9")
        if self.scheduling_weight <= 0:
            raise InvalidInputError(f"{self.name}: scheduling weight must be positive")
        for d in (self.dscp_data, self.dscp_signaling, self.dscp_voice):
            if not 0 <= d <= 63:
                raise InvalidInputError(f"{self.name}: DSCP must lie in 0..63")


def _check_marking(dscp, queue, who, queues=MW_QUEUES):
    if not 0 <= dscp <= 63:
        raise InvalidInputError(f"{who}: DSCP must lie in 0..63, got {dscp}")
    if not 0 <= queue < queues:
        raise InvalidInputError(f"{who}: MW queue must lie in 0..{queues - 1}, got {queue}")


@dataclass(frozen=True)
class QosRegistry:
    records: tuple[QciRecord, ...]
    transport_classes: tuple[TransportClass, ...] = ()
    mw_queues: int = MW_QUEUES

    def __post_init__(self):
        if not 1 <= self.mw_queues <= MW_QUEUES:
            raise InvalidInputError(f"MW queue count must lie in 1..{MW_QUEUES}")
        qcis = [r.qci for r in self.records]
        if len(set(qcis)) != len(qcis):
            raise InvalidInputError("duplicate QCI in registry")
        for r in self.records:
            _check_marking(r.dscp, r.mw_queue, f"QCI {r.qci}", self.mw_queues)
        for t in self.transport_classes:
            _check_marking(t.dscp, t.mw_queue, t.name, self.mw_queues)
        object.__setattr__(self, "records", tuple(sorted(self.records, key=lambda r: r.qci)))
        object.__setattr__(self, "transport_classes", tuple(self.transport_classes))

    def __getitem__(self, qci: int) -> QciRecord:
        for r in self.records:
            if r.qci == qci:
                return r
        raise NotFoundError(f"QCI {qci} not in registry")

    def queue_for_dscp(self, dscp: int) -> int:
        for r in self.records:
            if r.dscp == dscp:
                return r.mw_queue
        for t in self.transport_classes:
            if t.dscp == dscp:
                return t.mw_queue
        raise NotFoundError(f"DSCP {dscp} has no MW queue in registry")


_GBR, _NGBR = ResourceType.GBR, ResourceType.NON_GBR
_TCP_VIDEO = "Video (buffer steaming) TCP based (www. e-mail, chat, ftp)"


def default_qci_table() -> list[QciRecord]:
    # service texts are kept exactly as commonly published, typos included;
    # QCI 8 and 9 share one row, so priority 8 goes to QCI 8 and 9 to QCI 9
    return [
        QciRecord(1, _GBR, 2, 100, 1e-2, 46, 7, "Conversational voice"),
        QciRecord(2, _GBR, 4, 150, 1e-3, 26, 4, "Conversational video (Live Streaming)"),
        QciRecord(3, _GBR, 3, 50, 1e-3, 34, 5, "Real time gaming"),
        QciRecord(4, _GBR, 5, 300, 1e-6, 26, 4, "Non-conversational video (Buffer streaming)"),
        QciRecord(5, _NGBR, 1, 100, 1e-6, 46, 7, "IMS signaling"),
        QciRecord(6, _NGBR, 6, 300, 1e-6, 18, 2, _TCP_VIDEO),
        QciRecord(7, _NGBR, 7, 100, 1e-3, 18, 2, "Voice, Video (live streaming) interactive streaming."),
        QciRecord(8, _NGBR, 8, 300, 1e-6, 0, 0, _TCP_VIDEO),
        QciRecord(9, _NGBR, 9, 300, 1e-6, 0, 0, _TCP_VIDEO),
    ]


def default_transport_classes() -> list[TransportClass]:
    return [
        TransportClass("Signaling (SCTP)", 46, 7, "Stream Transmission Control Protocol"),
        TransportClass("Sync (1588V2)", 46, 7, "Synchronization Signal"),
        TransportClass("O&M", 46, 7, "Operation and maintenance"),
    ]


def default_registry() -> QosRegistry:
    return QosRegistry(tuple(default_qci_table()), tuple(default_transport_classes()))


def default_user_classes() -> list[UserClass]:
    """Gold / silver / bronze inter-user profile."""
    return [
        UserClass("Gold", arp=5, qci=6, scheduling_weight=100, dscp_data=34),
        UserClass("Silver", arp=7, qci=8, scheduling_weight=50, dscp_data=18),
        UserClass("Bronze", arp=9, qci=9, scheduling_weight=20, dscp_data=0),
    ]


class ProfileKind(str, enum.Enum):
    APPLICATION = "application"
    INTER_USER = "inter_user"


@dataclass(frozen=True)
class QosProfile:
    """How bearers are marked on the transport network.

    ``APPLICATION`` uses the registry's per-QCI DSCP. ``INTER_USER`` marks the
    QCIs owned by a user class with that class's data DSCP and queues them
    like any registry entry with the same DSCP; other QCIs fall back to the
    registry.
    """

    kind: ProfileKind = ProfileKind.APPLICATION
    registry: QosRegistry = field(default_factory=default_registry)
    user_classes: tuple[UserClass, ...] = ()

    @classmethod
    def inter_user(cls, registry: QosRegistry | None = None, user_classes=None) -> "QosProfile":
        return cls(ProfileKind.INTER_USER, registry or default_registry(),
                   tuple(default_user_classes() if user_classes is None else user_classes))


def map_qci_to_transport(qci: int, profile: QosProfile | None = None) -> tuple[int, int]:
    """(DSCP, MW queue) for a QCI under ``profile``."""
    profile = profile or QosProfile()
    record = profile.registry[qci]
    if ProfileKind(profile.kind) is ProfileKind.INTER_USER:
        for uc in profile.user_classes:
            if uc.qci == qci:
                return uc.dscp_data, profile.registry.queue_for_dscp(uc.dscp_data)
    return record.dscp, record.mw_queue
