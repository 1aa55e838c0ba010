"""Weighted throughput shares and a fluid TTI-level scheduler.

Each 1 ms TTI the cell capacity is handed out in two passes:

1. GBR bearers get up to their guaranteed rate (bounded by backlog);
2. the remainder is split in proportion to scheduling weight among all
   bearers with backlog and headroom (non-GBR bearers, and GBR bearers
   between GBR and MBR). Bearers sharing an AMBR group compete as one
   entity whose weight is the sum of its members' and whose cap is the
   AMBR; the group's allocation is then split among its members the same way.

Capacity is fluid (no PRB quantization).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import InfeasibleScheduleError, InvalidInputError

TTI_MS = 1.0
PACKET_BITS = 1500 * 8


def expected_shares(weights: Sequence[float], total_mbps: float) -> tuple[list[float], list[float]]:
    """Per-user throughput and fraction for a weighted split of ``total_mbps``."""
    if len(weights) == 0:
        raise InvalidInputError("weight list is empty")
    if any(w <= 0 for w in weights):
        raise InvalidInputError("weights must be positive")
    if total_mbps < 0:
        raise InvalidInputError("total throughput must be >= 0")
    wsum = math.fsum(weights)
    fractions = [w / wsum for w in weights]
    shares = [total_mbps * f for f in fractions]
    # push the rounding residue onto the largest share so the sum is exact
    residue = total_mbps - math.fsum(shares)
    if residue:
        i = max(range(len(shares)), key=shares.__getitem__)
        shares[i] += residue
    return shares, fractions


@dataclass(frozen=True)
class Arp:
    priority: int
    preemption_capable: bool = False
    preemptable: bool = True

    def __post_init__(self):
        if not 1 <= self.priority <= 15:
            raise InvalidInputError(f"ARP priority must lie in 1..15, got {self.priority}")


class DemandKind(str, enum.Enum):
    FULL_BUFFER = "full_buffer"
    CBR = "cbr"
    POISSON = "poisson"


@dataclass(frozen=True)
class Demand:
    """Offered traffic of a bearer. POISSON draws 1500-byte packets per TTI."""

    kind: DemandKind = DemandKind.FULL_BUFFER
    rate_mbps: float = 0.0

    def __post_init__(self):
        if self.rate_mbps < 0:
            raise InvalidInputError("demand rate must be >= 0")


FULL_BUFFER = Demand()


@dataclass(frozen=True)
class Bearer:
    owner: str
    qci: int
    arp: Arp = Arp(9)
    gbr_mbps: float | None = None
    mbr_mbps: float | None = None
    ambr_group: str | None = None
    ambr_mbps: float | None = None
    demand: Demand = FULL_BUFFER
    name: str = ""

    def __post_init__(self):
        if self.gbr_mbps is not None:
            if self.gbr_mbps < 0:
                raise InvalidInputError(f"{self.label}: GBR must be >= 0")
            if self.mbr_mbps is None:
                object.__setattr__(self, "mbr_mbps", self.gbr_mbps)
            elif self.mbr_mbps < self.gbr_mbps:
                raise InvalidInputError(f"{self.label}: GBR must not exceed MBR")
            if self.ambr_group is not None:
                raise InvalidInputError(f"{self.label}: AMBR applies to non-GBR bearers only")
        elif self.mbr_mbps is not None:
            raise InvalidInputError(f"{self.label}: MBR is defined for GBR bearers only")
        if self.ambr_group is not None and (self.ambr_mbps is None or self.ambr_mbps < 0):
            raise InvalidInputError(f"{self.label}: AMBR group needs a non-negative ambr_mbps")

    @property
    def is_gbr(self) -> bool:
        return self.gbr_mbps is not None

    @property
    def label(self) -> str:
        return self.name or f"{self.owner}/qci{self.qci}"


@dataclass(frozen=True)
class SimUser:
    name: str
    weight: float
    bearers: tuple[Bearer, ...]

    def __post_init__(self):
        if self.weight <= 0:
            raise InvalidInputError(f"{self.name}: weight must be positive")
        object.__setattr__(self, "bearers", tuple(self.bearers))


@dataclass
class SimResult:
    user_names: list[str]
    bearer_labels: list[str]
    bearer_owner: list[int]
    achieved_mbps: dict[str, float]
    bearer_mbps: list[float]
    trace: np.ndarray = field(repr=False)  # (tti, bearer) allocated rate in Mbps

    def user_trace(self) -> np.ndarray:
        out = np.zeros((self.trace.shape[0], len(self.user_names)))
        for j, u in enumerate(self.bearer_owner):
            out[:, u] += self.trace[:, j]
        return out


def waterfill(budget: float, weights: Sequence[float], caps: Sequence[float]) -> list[float]:
    """Weighted split of ``budget`` where no entity exceeds its cap."""
    alloc = [0.0] * len(weights)
    active = [i for i, c in enumerate(caps) if c > 0 and weights[i] > 0]
    remaining = budget
    while active and remaining > 0:
        level = remaining / math.fsum(weights[i] for i in active)
        capped = [i for i in active if weights[i] * level >= caps[i]]
        if not capped:
            for i in active:
                alloc[i] = weights[i] * level
            break
        for i in capped:
            alloc[i] = caps[i]
            remaining -= caps[i]
        active = [i for i in active if i not in capped]
    return alloc


def _flatten(users):
    bearers, owners, weights = [], [], []
    # a user's weight is split evenly over its bearers so user-level shares
    # follow the weights whatever the bearer count
    for u_idx, user in enumerate(users):
        for b in user.bearers:
            bearers.append(b)
            owners.append(u_idx)
            weights.append(float(user.weight) / len(user.bearers))
    return bearers, owners, weights


def _ambr_groups(bearers, owners):
    groups = {}
    for j, b in enumerate(bearers):
        if b.ambr_group is None:
            continue
        key = (owners[j], b.ambr_group)
        if key in groups and groups[key][0] != b.ambr_mbps:
            raise InvalidInputError(f"AMBR group {b.ambr_group!r} has conflicting limits")
        groups.setdefault(key, (b.ambr_mbps, []))[1].append(j)
    return groups


def simulate_scheduler(users: Sequence[SimUser], cell_capacity_mbps: float, tti_count: int,
                       seed: int | None = 0) -> SimResult:
    """Run ``tti_count`` TTIs and report the mean rate each user achieved."""
    if tti_count < 1:
        raise InvalidInputError("tti_count must be >= 1")
    if cell_capacity_mbps <= 0:
        raise InvalidInputError("cell capacity must be > 0")
    bearers, owners, weights = _flatten(users)
    if not bearers:
        raise InvalidInputError("no bearers to schedule")
    gbr_total = math.fsum(b.gbr_mbps for b in bearers if b.is_gbr)
    if gbr_total > cell_capacity_mbps:
        raise InfeasibleScheduleError(
            f"guaranteed rates {gbr_total:g} Mbps exceed cell capacity {cell_capacity_mbps:g} Mbps")
    groups = _ambr_groups(bearers, owners)
    grouped = {j for _, members in groups.values() for j in members}
    ungrouped = [j for j in range(len(bearers)) if j not in grouped]

    rng = np.random.default_rng(seed)
    n = len(bearers)
    backlog = np.zeros(n)  # Mbit
    trace = np.zeros((tti_count, n))
    dt = TTI_MS / 1000.0

    for t in range(tti_count):
        for j, b in enumerate(bearers):
            kind = b.demand.kind
            if kind is DemandKind.FULL_BUFFER:
                backlog[j] = math.inf
            elif kind is DemandKind.CBR:
                backlog[j] += b.demand.rate_mbps * dt
            else:
                packets = rng.poisson(b.demand.rate_mbps * 1e6 * dt / PACKET_BITS)
                backlog[j] += packets * PACKET_BITS / 1e6
        # rate that would drain each backlog this TTI
        drain = backlog / dt
        rate = np.zeros(n)
        for j, b in enumerate(bearers):
            if b.is_gbr:
                rate[j] = min(b.gbr_mbps, drain[j])
        residual = max(cell_capacity_mbps - rate.sum(), 0.0)
        headroom = [
            max(min(b.mbr_mbps, drain[j]) - rate[j], 0.0) if b.is_gbr else drain[j]
            for j, b in enumerate(bearers)
        ]

        ent_weights = [weights[j] for j in ungrouped]
        ent_caps = [headroom[j] for j in ungrouped]
        group_list = list(groups.values())
        for limit, members in group_list:
            ent_weights.append(math.fsum(weights[j] for j in members))
            ent_caps.append(min(limit, math.fsum(headroom[j] for j in members)))
        top = waterfill(residual, ent_weights, ent_caps)
        for k, j in enumerate(ungrouped):
            rate[j] += top[k]
        for g, (limit, members) in enumerate(group_list):
            inner = waterfill(top[len(ungrouped) + g], [weights[j] for j in members],
                              [headroom[j] for j in members])
            for k, j in enumerate(members):
                rate[j] += inner[k]

        trace[t] = rate
        backlog -= rate * dt
        np.maximum(backlog, 0.0, out=backlog)

    bearer_mbps = trace.mean(axis=0)
    per_user = np.zeros(len(users))
    np.add.at(per_user, owners, bearer_mbps)
    return SimResult(
        user_names=[u.name for u in users],
        bearer_labels=[b.label for b in bearers],
        bearer_owner=owners,
        achieved_mbps={u.name: float(per_user[i]) for i, u in enumerate(users)},
        bearer_mbps=[float(x) for x in bearer_mbps],
        trace=trace,
    )
