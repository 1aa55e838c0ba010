"""LTE link budget: transmit power to maximum allowable pathloss (MAPL).

Every quantity is in dB/dBm unless the name says otherwise. The chain is::

    D = 12 * C                      subcarriers sharing the power
    E = A - 10 log10(D)             power per subcarrier
    J = E + F + G - H - I           EIRP per subcarrier
    M = K + L - 174 + 10 log10(W)   receiver sensitivity, W = 15 kHz
    R = M - N + O + P + Q           minimum reception strength
    U = J - R - S - T               MAPL

Letters follow the usual planning-sheet column labels and are only used in
this docstring; the code uses descriptive names.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from scipy.optimize import bisect
from scipy.special import erfc, erfcx

from .errors import ConvergenceError, InvalidInputError, SaturationError

THERMAL_NOISE_DBM_PER_HZ = -174.0
SUBCARRIER_BANDWIDTH_HZ = 15000.0
SUBCARRIERS_PER_RB = 12

# channel bandwidth (MHz) -> resource blocks
RB_PER_BANDWIDTH = {1.4: 6, 3.0: 15, 5.0: 25, 10.0: 50, 15.0: 75, 20.0: 100}


class Morphology(str, enum.Enum):
    DENSE_URBAN = "DenseUrban"
    URBAN = "Urban"
    SUBURBAN = "Suburban"
    RURAL = "Rural"


class Direction(str, enum.Enum):
    UL = "UL"
    DL = "DL"


class ChannelType(str, enum.Enum):
    PUSCH = "PUSCH"
    PDSCH = "PDSCH"


class Duplex(str, enum.Enum):
    FDD = "FDD"


class ChannelModel(str, enum.Enum):
    ETU3 = "ETU3"
    ETU120 = "ETU120"
    EVA120 = "EVA120"


class MimoScheme(str, enum.Enum):
    ONE_BY_TWO = "OneByTwo"
    TWO_BY_TWO_SFBC = "TwoByTwoSFBC"


class Modulation(str, enum.Enum):
    QPSK = "QPSK"
    QAM16 = "QAM16"
    QAM64 = "QAM64"

    @property
    def bits_per_symbol(self) -> int:
        return {"QPSK": 2, "QAM16": 4, "QAM64": 6}[self.value]


class ShadowMode(str, enum.Enum):
    PASSTHROUGH = "Passthrough"
    JAKES_SOLVE = "JakesSolve"


@dataclass(frozen=True)
class Mcs:
    modulation: Modulation
    code_rate: float

    def __post_init__(self):
        if not 0.0 < self.code_rate <= 1.0:
            raise InvalidInputError(f"code rate must lie in (0, 1], got {self.code_rate}")


def total_rb(bandwidth_mhz: float) -> int:
    for bw, rb in RB_PER_BANDWIDTH.items():
        if math.isclose(bw, bandwidth_mhz):
            return rb
    raise InvalidInputError(f"unsupported LTE channel bandwidth {bandwidth_mhz} MHz")


@dataclass(frozen=True)
class LinkBudgetScenario:
    """One direction of one morphology: every input of the budget sheet.

    Interference margin is either given directly (``interference_margin_db``)
    or produced by the load model from ``target_load`` and
    ``coupling_factor``. The shadow margin is either given directly
    (``ShadowMode.PASSTHROUGH``) or solved from ``shadow_std_db`` and
    ``area_coverage_prob`` with the Jakes formula, which needs the pathloss
    slope of the propagation model.
    """

    morphology: Morphology
    direction: Direction
    max_total_tx_power_dbm: float
    allocated_rb: int
    rb_to_distribute_power: int
    sinr_db: float
    rx_noise_figure_db: float
    channel_type: ChannelType | None = None
    duplex: Duplex = Duplex.FDD
    system_bandwidth_mhz: float = 20.0
    channel_model: ChannelModel = ChannelModel.ETU3
    mimo_scheme: MimoScheme = MimoScheme.ONE_BY_TWO
    cell_edge_rate_kbps: float = 0.0
    mcs: Mcs = Mcs(Modulation.QPSK, 1.0)
    beamforming_gain_db: float = 0.0
    tx_antenna_gain_dbi: float = 0.0
    tx_cable_loss_db: float = 0.0
    tx_body_loss_db: float = 0.0
    rx_antenna_gain_dbi: float = 0.0
    rx_cable_loss_db: float = 0.0
    rx_body_loss_db: float = 0.0
    target_load: float = 0.0
    interference_margin_db: float | None = None
    coupling_factor: float | None = None
    indoor_penetration_loss_db: float = 0.0
    shadow_std_db: float = 0.0
    area_coverage_prob: float = 0.95
    shadow_margin_db: float | None = None
    shadow_mode: ShadowMode = ShadowMode.PASSTHROUGH
    name: str = ""

    def __post_init__(self):
        if self.channel_type is None:
            default = ChannelType.PUSCH if self.direction is Direction.UL else ChannelType.PDSCH
            object.__setattr__(self, "channel_type", default)
        n_rb = total_rb(self.system_bandwidth_mhz)
        if not 1 <= self.allocated_rb <= self.rb_to_distribute_power <= n_rb:
            raise InvalidInputError(
                f"{self.label}: need 1 <= allocated RB ({self.allocated_rb}) <= RB to "
                f"distribute power ({self.rb_to_distribute_power}) <= {n_rb}"
            )
        for name in ("tx_cable_loss_db", "tx_body_loss_db", "rx_cable_loss_db",
                     "rx_body_loss_db", "indoor_penetration_loss_db", "shadow_std_db"):
            if getattr(self, name) < 0:
                raise InvalidInputError(f"{self.label}: {name} must be >= 0")
        if not 0.0 <= self.target_load <= 1.0:
            raise InvalidInputError(f"{self.label}: target load must lie in [0, 1]")
        if not 0.0 < self.area_coverage_prob < 1.0:
            raise InvalidInputError(f"{self.label}: area coverage probability must lie in (0, 1)")
        if self.interference_margin_db is None and self.coupling_factor is None:
            raise InvalidInputError(f"{self.label}: give interference_margin_db or coupling_factor")
        if self.interference_margin_db is not None and self.interference_margin_db < 0:
            raise InvalidInputError(f"{self.label}: interference margin must be >= 0")
        if self.shadow_mode is ShadowMode.PASSTHROUGH:
            if self.shadow_margin_db is None:
                raise InvalidInputError(f"{self.label}: passthrough shadow mode needs shadow_margin_db")
            if self.shadow_margin_db < 0:
                raise InvalidInputError(f"{self.label}: shadow margin must be >= 0")

    @property
    def label(self) -> str:
        return self.name or f"{self.morphology.value}/{self.direction.value}"


@dataclass(frozen=True)
class LinkBudgetResult:
    scenario: LinkBudgetScenario
    subcarriers_to_distribute: int
    subcarrier_power_dbm: float
    eirp_per_subcarrier_dbm: float
    receiver_sensitivity_dbm: float
    interference_margin_db: float
    min_reception_strength_dbm: float
    shadow_margin_db: float
    mapl_db: float

    def rows(self) -> dict[str, float]:
        """Derived rows keyed by stable identifiers, in sheet order."""
        return {
            "subcarriers_to_distribute": float(self.subcarriers_to_distribute),
            "subcarrier_power_dbm": self.subcarrier_power_dbm,
            "eirp_per_subcarrier_dbm": self.eirp_per_subcarrier_dbm,
            "receiver_sensitivity_dbm": self.receiver_sensitivity_dbm,
            "interference_margin_db": self.interference_margin_db,
            "min_reception_strength_dbm": self.min_reception_strength_dbm,
            "shadow_margin_db": self.shadow_margin_db,
            "mapl_db": self.mapl_db,
        }


@dataclass(frozen=True)
class LinkPair:
    uplink: LinkBudgetResult
    downlink: LinkBudgetResult
    limiting: Direction = field(init=False)

    def __post_init__(self):
        # ties go to UL: conservative, and LTE is expected to be UL limited anyway
        lim = Direction.UL if self.uplink.mapl_db <= self.downlink.mapl_db else Direction.DL
        object.__setattr__(self, "limiting", lim)

    @property
    def gap_db(self) -> float:
        """DL MAPL minus UL MAPL."""
        return self.downlink.mapl_db - self.uplink.mapl_db

    @property
    def limiting_mapl_db(self) -> float:
        return min(self.uplink.mapl_db, self.downlink.mapl_db)


def _nonneg(**values):
    for name, v in values.items():
        if v < 0:
            raise InvalidInputError(f"{name} must be >= 0, got {v}")


def subcarrier_power(total_tx_power_dbm: float, rb_to_distribute: int) -> float:
    """Power per subcarrier with the total spread evenly over ``12 * rb`` subcarriers."""
    if rb_to_distribute < 1:
        raise InvalidInputError(f"RB count must be >= 1, got {rb_to_distribute}")
    return total_tx_power_dbm - 10.0 * math.log10(SUBCARRIERS_PER_RB * rb_to_distribute)


def eirp_per_subcarrier(subcarrier_power_dbm: float, beamforming_gain_db: float,
                        tx_antenna_gain_dbi: float, tx_cable_loss_db: float,
                        tx_body_loss_db: float) -> float:
    _nonneg(tx_cable_loss_db=tx_cable_loss_db, tx_body_loss_db=tx_body_loss_db)
    return (subcarrier_power_dbm + beamforming_gain_db + tx_antenna_gain_dbi
            - tx_cable_loss_db - tx_body_loss_db)


def receiver_sensitivity(sinr_db: float, noise_figure_db: float,
                         subcarrier_bandwidth_hz: float = SUBCARRIER_BANDWIDTH_HZ) -> float:
    if subcarrier_bandwidth_hz <= 0:
        raise InvalidInputError("subcarrier bandwidth must be > 0")
    return (sinr_db + noise_figure_db + THERMAL_NOISE_DBM_PER_HZ
            + 10.0 * math.log10(subcarrier_bandwidth_hz))


def min_reception_strength(sensitivity_dbm: float, rx_antenna_gain_dbi: float,
                           rx_cable_loss_db: float, rx_body_loss_db: float,
                           interference_margin_db: float) -> float:
    _nonneg(rx_cable_loss_db=rx_cable_loss_db, rx_body_loss_db=rx_body_loss_db,
            interference_margin_db=interference_margin_db)
    return (sensitivity_dbm - rx_antenna_gain_dbi + rx_cable_loss_db
            + rx_body_loss_db + interference_margin_db)


def mapl(eirp_dbm: float, min_reception_dbm: float, penetration_loss_db: float,
         shadow_margin_db: float) -> float:
    _nonneg(penetration_loss_db=penetration_loss_db, shadow_margin_db=shadow_margin_db)
    return eirp_dbm - min_reception_dbm - penetration_loss_db - shadow_margin_db


def interference_margin(load: float, coupling_factor: float) -> float:
    """Load-driven interference margin ``-10 log10(1 - F * load)`` in dB.

    ``coupling_factor`` F scales how much of the cell load turns into
    interference at the cell edge. Raises SaturationError when ``F * load``
    reaches 1.
    """
    if not 0.0 <= load <= 1.0:
        raise InvalidInputError(f"load must lie in [0, 1], got {load}")
    if coupling_factor < 0:
        raise InvalidInputError(f"coupling factor must be >= 0, got {coupling_factor}")
    x = coupling_factor * load
    if x >= 1.0:
        raise SaturationError(f"interference margin diverges at coupling*load = {x:g}")
    return -10.0 * math.log10(1.0 - x)


def calibrate_coupling_factor(load: float, margin_db: float) -> float:
    """Coupling factor that makes ``interference_margin(load, F) == margin_db``."""
    if not 0.0 < load <= 1.0:
        raise InvalidInputError(f"calibration load must lie in (0, 1], got {load}")
    if margin_db < 0:
        raise InvalidInputError("margin must be >= 0")
    return (1.0 - 10.0 ** (-margin_db / 10.0)) / load


def jakes_area_coverage(margin_db: float, sigma_db: float,
                        slope_db_per_decade: float) -> float:
    """Fraction of the cell area above threshold for an edge margin.

    Log-normal shadowing with deviation ``sigma_db`` on a pathloss line of
    ``slope_db_per_decade`` (10 times the pathloss exponent).
    """
    if sigma_db <= 0:
        return 1.0 if margin_db >= 0 else 0.0
    s2 = sigma_db * math.sqrt(2.0)
    a = -margin_db / s2
    b = slope_db_per_decade * math.log10(math.e) / s2
    # exp((1-2ab)/b^2) * erfc((1-ab)/b) rewritten with erfcx to avoid overflow
    return 0.5 * (erfc(a) + math.exp(-a * a) * erfcx((1.0 - a * b) / b))


def shadow_fading_margin(sigma_db: float, area_coverage_prob: float,
                         pathloss_slope_db_per_decade: float | None = None,
                         mode: ShadowMode = ShadowMode.PASSTHROUGH,
                         margin_db: float | None = None, xtol: float = 1e-3) -> float:
    """Shadow fading margin for a target area coverage probability.

    In passthrough mode ``margin_db`` is returned unchanged. In Jakes mode the
    margin solving ``jakes_area_coverage(T) == area_coverage_prob`` is found
    by bisection on ``[-3 sigma, 3 sigma]``.
    """
    if sigma_db < 0:
        raise InvalidInputError("shadow standard deviation must be >= 0")
    if not 0.0 < area_coverage_prob < 1.0:
        raise InvalidInputError("area coverage probability must lie in (0, 1)")
    mode = ShadowMode(mode)
    if mode is ShadowMode.PASSTHROUGH:
        if margin_db is None:
            raise InvalidInputError("passthrough mode needs a configured margin")
        return margin_db
    if sigma_db == 0:
        return 0.0
    if pathloss_slope_db_per_decade is None or pathloss_slope_db_per_decade <= 0:
        raise InvalidInputError("Jakes mode needs a positive pathloss slope")

    def excess(t):
        return jakes_area_coverage(t, sigma_db, pathloss_slope_db_per_decade) - area_coverage_prob

    lo, hi = -3.0 * sigma_db, 3.0 * sigma_db
    f_lo, f_hi = excess(lo), excess(hi)
    if f_lo > 0 or f_hi < 0:
        raise ConvergenceError(
            f"target coverage {area_coverage_prob} not bracketed: coverage spans "
            f"[{f_lo + area_coverage_prob:.6f}, {f_hi + area_coverage_prob:.6f}] "
            f"for margins [{lo:.3f}, {hi:.3f}] dB"
        )
    return bisect(excess, lo, hi, xtol=xtol)


def resolve_interference_margin(scenario: LinkBudgetScenario, load: float | None = None) -> float:
    """Interference margin of a scenario, optionally re-evaluated at another load."""
    if scenario.coupling_factor is not None:
        return interference_margin(scenario.target_load if load is None else load,
                                   scenario.coupling_factor)
    if load is not None:
        raise InvalidInputError(f"{scenario.label}: no coupling factor to evaluate load {load}")
    return scenario.interference_margin_db


def build_link_budget(scenario: LinkBudgetScenario,
                      pathloss_slope_db_per_decade: float | None = None,
                      load: float | None = None) -> LinkBudgetResult:
    """Run the whole chain for one scenario.

    ``pathloss_slope_db_per_decade`` is only needed for Jakes shadow margins.
    ``load`` overrides the target load through the coupling-factor model.
    """
    n_sc = SUBCARRIERS_PER_RB * scenario.rb_to_distribute_power
    power = subcarrier_power(scenario.max_total_tx_power_dbm, scenario.rb_to_distribute_power)
    eirp = eirp_per_subcarrier(power, scenario.beamforming_gain_db, scenario.tx_antenna_gain_dbi,
                               scenario.tx_cable_loss_db, scenario.tx_body_loss_db)
    sens = receiver_sensitivity(scenario.sinr_db, scenario.rx_noise_figure_db)
    im = resolve_interference_margin(scenario, load)
    rmin = min_reception_strength(sens, scenario.rx_antenna_gain_dbi, scenario.rx_cable_loss_db,
                                  scenario.rx_body_loss_db, im)
    shadow = shadow_fading_margin(scenario.shadow_std_db, scenario.area_coverage_prob,
                                  pathloss_slope_db_per_decade, scenario.shadow_mode,
                                  scenario.shadow_margin_db)
    u = mapl(eirp, rmin, scenario.indoor_penetration_loss_db, shadow)
    return LinkBudgetResult(scenario, n_sc, power, eirp, sens, im, rmin, shadow, u)


def evaluate_pair(uplink: LinkBudgetScenario, downlink: LinkBudgetScenario,
                  pathloss_slope_db_per_decade: float | None = None) -> LinkPair:
    if uplink.direction is not Direction.UL or downlink.direction is not Direction.DL:
        raise InvalidInputError("pair must be (UL scenario, DL scenario)")
    return LinkPair(build_link_budget(uplink, pathloss_slope_db_per_decade),
                    build_link_budget(downlink, pathloss_slope_db_per_decade))
