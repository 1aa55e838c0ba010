"""ARP-based admission control for GBR bearers."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

from ..errors import InvalidInputError
from .scheduler import Bearer


class Outcome(str, enum.Enum):
    ACCEPT = "Accept"
    REJECT = "Reject"
    ACCEPT_WITH_PREEMPTION = "AcceptWithPreemption"


@dataclass(frozen=True)
class AdmissionDecision:
    outcome: Outcome
    victims: tuple[Bearer, ...] = ()

    @property
    def accepted(self) -> bool:
        return self.outcome is not Outcome.REJECT


def preemption_order(existing: Sequence[Bearer], candidate: Bearer) -> list[Bearer]:
    """Bearers the candidate may pre-empt, in the order they would go.

    Only preemptable GBR bearers with a strictly lower priority (larger ARP
    number) qualify. Larger ARP numbers go first; among equal ARP the most
    recently admitted (later in ``existing``) goes first.
    """
    eligible = [
        (i, b) for i, b in enumerate(existing)
        if b.is_gbr and b.arp.preemptable and b.arp.priority > candidate.arp.priority
    ]
    eligible.sort(key=lambda ib: (-ib[1].arp.priority, -ib[0]))
    return [b for _, b in eligible]


def admission_control(existing: Sequence[Bearer], candidate: Bearer, gbr_capacity_mbps: float,
                      preemption_enabled: bool = False) -> AdmissionDecision:
    """Admit, reject, or admit by pre-empting lower-priority GBR bearers.

    ``existing`` is in admission order. Non-GBR bearers reserve nothing and
    are always accepted.
    """
    if gbr_capacity_mbps <= 0:
        raise InvalidInputError("GBR capacity must be > 0")
    if not candidate.is_gbr:
        return AdmissionDecision(Outcome.ACCEPT)
    used = math.fsum(b.gbr_mbps for b in existing if b.is_gbr)
    if used + candidate.gbr_mbps <= gbr_capacity_mbps:
        return AdmissionDecision(Outcome.ACCEPT)
    if not (preemption_enabled and candidate.arp.preemption_capable):
        return AdmissionDecision(Outcome.REJECT)
    victims = []
    for b in preemption_order(existing, candidate):
        victims.append(b)
        used -= b.gbr_mbps
        if used + candidate.gbr_mbps <= gbr_capacity_mbps:
            return AdmissionDecision(Outcome.ACCEPT_WITH_PREEMPTION, tuple(victims))
    return AdmissionDecision(Outcome.REJECT)
