"""QCI registry, transport marking, weighted shares, scheduling and admission."""

from .admission import AdmissionDecision, Outcome, admission_control, preemption_order
from .config import emit_qos_config, parse_qos_config, read_qos_config, write_qos_config
from .registry import (
    ProfileKind,
    QciRecord,
    QosProfile,
    QosRegistry,
    ResourceType,
    TransportClass,
    UserClass,
    default_qci_table,
    default_registry,
    default_transport_classes,
    default_user_classes,
    map_qci_to_transport,
)
from .scheduler import (
    FULL_BUFFER,
    Arp,
    Bearer,
    Demand,
    DemandKind,
    SimResult,
    SimUser,
    expected_shares,
    simulate_scheduler,
    waterfill,
)

__all__ = [
    "AdmissionDecision", "Arp", "Bearer", "Demand", "DemandKind", "FULL_BUFFER", "Outcome",
    "ProfileKind", "QciRecord", "QosProfile", "QosRegistry", "ResourceType", "SimResult",
    "SimUser", "TransportClass", "UserClass", "admission_control", "default_qci_table",
    "default_registry", "default_transport_classes", "default_user_classes",
    "emit_qos_config", "expected_shares", "map_qci_to_transport", "parse_qos_config",
    "preemption_order", "read_qos_config", "simulate_scheduler", "waterfill",
    "write_qos_config",
]
