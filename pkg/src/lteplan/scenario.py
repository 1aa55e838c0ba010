"""Scenario file loading.

A scenario is an INI-style file: ``[kind.name]`` headers followed by
``key = value`` lines, ``#`` or ``;`` comments, lists comma separated.
Units are part of the key names. Every key must be known for its section
kind and every reference (``uplink = urban_ul``) must resolve. See
``docs/scenario-format.md`` for the full key list.
"""

from __future__ import annotations

import configparser
import re
from dataclasses import fields
from pathlib import Path

from . import dimensioning, hspa, latency, propagation
from .errors import InvalidInputError
from .linkbudget import (
    ChannelModel,
    ChannelType,
    Direction,
    LinkBudgetScenario,
    Mcs,
    MimoScheme,
    Modulation,
    Morphology,
    ShadowMode,
)
from .qos import Arp, Bearer, Demand, DemandKind, SimUser, UserClass


class ScenarioError(InvalidInputError):
    """A scenario file is malformed or inconsistent."""


def _bool(text):
    v = text.strip().lower()
    if v in ("true", "yes", "on", "1"):
        return True
    if v in ("false", "no", "off", "0"):
        return False
    raise ValueError(f"not a boolean: {text!r}")


def _list(conv):
    def parse(text):
        items = [t.strip() for t in text.split(",") if t.strip()]
        if not items:
            raise ValueError("empty list")
        return [conv(t) for t in items]
    return parse


def _enum(cls):
    def parse(text):
        text = text.strip()
        for member in cls:
            if text.lower() in (member.value.lower(), member.name.lower()):
                return member
        raise ValueError(f"expected one of {[m.value for m in cls]}, got {text!r}")
    return parse


class _Ref(str):
    pass


def _ref(kind):
    def parse(text):
        r = _Ref(text.strip())
        r.kind = kind
        return r
    return parse


def _refs(kind):
    inner = _ref(kind)

    def parse(text):
        return [inner(t) for t in text.split(",") if t.strip()]
    return parse


_LINKBUDGET = {
    "morphology": _enum(Morphology), "direction": _enum(Direction),
    "channel_type": _enum(ChannelType), "system_bandwidth_mhz": float,
    "channel_model": _enum(ChannelModel), "mimo_scheme": _enum(MimoScheme),
    "cell_edge_rate_kbps": float, "modulation": _enum(Modulation), "code_rate": float,
    "max_tx_power_dbm": float, "allocated_rb": int, "rb_to_distribute_power": int,
    "beamforming_gain_db": float, "tx_antenna_gain_dbi": float, "tx_cable_loss_db": float,
    "tx_body_loss_db": float, "sinr_db": float, "rx_noise_figure_db": float,
    "rx_antenna_gain_dbi": float, "rx_cable_loss_db": float, "rx_body_loss_db": float,
    "target_load": float, "interference_margin_db": float, "coupling_factor": float,
    "indoor_penetration_loss_db": float, "shadow_std_db": float, "area_coverage_prob": float,
    "shadow_margin_db": float, "shadow_mode": _enum(ShadowMode),
    "propagation": _ref("propagation"),
}
_HSPA_FIELDS = {f.name: (int if f.name == "carriers" else float) for f in fields(hspa.HspaConfig)}

SCHEMAS = {
    "output": {"format": lambda t: t.strip().lower(), "precision": int},
    "propagation": {"frequency_mhz": float, "base_height_m": float, "mobile_height_m": float,
                    "clutter_offset_db": float, "morphology": _enum(Morphology)},
    "linkbudget": _LINKBUDGET,
    "pair": {"uplink": _ref("linkbudget"), "downlink": _ref("linkbudget"),
             "propagation": _ref("propagation")},
    "loadcurve": {"pair": _ref("pair"), "loads": _list(float), "ul_coupling_factor": float,
                  "dl_coupling_factor": float},
    "throughput": {"rb_count": int, "modulation": _enum(Modulation), "code_rate": float,
                   "layers": int, "overhead_fraction": float, "ue_category": str,
                   "direction": _enum(Direction), "ue_category_cap_mbps": float},
    "dimensioning": {"avg_sector_throughput_mbps": float, "dl_loading": float,
                     "peak_to_avg_margin": float, "per_subscriber_busy_hour_kbps": float,
                     "sectors_per_site": int, "geometry_factor": float,
                     "regions": _refs("region")},
    "region": {"area_km2": float, "subscribers": int, "radius_km": float, "pair": _ref("pair")},
    "hspa": {**_HSPA_FIELDS, "users": _list(int), "loads": _list(float),
             "cell_edge_rate_kbps": float, "edge_radius_km": float},
    "comparison": {"lte_throughput_mbps": float, "lte_bandwidth_mhz": float,
                   "hspa_measured_mbps": float, "hspa_scheduling_rate": float,
                   "hspa_bandwidth_mhz": float, "dimensioning": _ref("dimensioning")},
    "qos": {"profile": str, "mapping": str, "user_classes": _refs("userclass")},
    "userclass": {"arp": int, "qci": int, "weight": int, "dscp_data": int,
                  "dscp_signaling": int, "dscp_voice": int, "label": str},
    "share": {"weights": _list(float), "total_mbps": float, "labels": _list(str)},
    "simulation": {"capacity_mbps": float, "tti_count": int, "users": _refs("ue"), "seed": int},
    "ue": {"weight": float, "bearers": _refs("bearer")},
    "bearer": {"qci": int, "arp_priority": int, "preemption_capable": _bool, "preemptable": _bool,
               "gbr_mbps": float, "mbr_mbps": float, "ambr_group": str, "ambr_mbps": float,
               "demand": _enum(DemandKind), "demand_rate_mbps": float},
    "topology": {"profile": _enum(latency.Technology), "technology": _enum(latency.Technology),
                 "radio_access_rtt_ms": float, "hops": _refs("hop"), "sizes": _list(float)},
    "hop": {"label": str, "processing_delay_ms": float, "link_rate_mbps": float,
            "propagation_delay_ms": float, "segment": _enum(latency.Segment)},
    "budget": {"path": _ref("topology"), "interface": _enum(latency.Interface),
               "reference_size_bytes": float, "s1_one_way_ms": float,
               "s1_access_share_ms": float, "s1_transport_share_ms": float,
               "x2_one_way_ms": float, "per_link_delay_ms": float,
               "x2_peer": _ref("topology"), "cross_connect": str},
    "ancillary": {"s1u_mbps": float, "x2_fraction": float, "control_fraction": float},
}

REQUIRED = {
    "linkbudget": ("morphology", "direction", "max_tx_power_dbm", "allocated_rb",
                   "rb_to_distribute_power", "sinr_db", "rx_noise_figure_db"),
    "propagation": ("base_height_m",),
    "pair": ("uplink", "downlink"),
    "loadcurve": ("pair", "loads"),
    "dimensioning": ("avg_sector_throughput_mbps",),
    "region": ("area_km2", "subscribers"),
    "share": ("weights", "total_mbps"),
    "simulation": ("capacity_mbps", "tti_count", "users"),
    "ue": ("weight", "bearers"),
    "bearer": ("qci",),
    "userclass": ("arp", "qci", "weight", "dscp_data"),
    "hop": ("link_rate_mbps",),
    "budget": ("path",),
    "ancillary": ("s1u_mbps",),
}

_HEADER = re.compile(r"^\s*\[([^\]]+)\]")
_KEY = re.compile(r"^\s*([^=#;\s\[][^=]*?)\s*=")


def _line_index(text):
    """(section, key) -> line number, for error messages."""
    index, section = {}, None
    for n, line in enumerate(text.splitlines(), start=1):
        m = _HEADER.match(line)
        if m:
            section = m.group(1).strip()
            index[(section, None)] = n
            continue
        m = _KEY.match(line)
        if m and section is not None:
            index.setdefault((section, m.group(1).strip()), n)
    return index


class Scenario:
    """Parsed, validated scenario: ``sections[kind][name] -> {key: value}``."""

    def __init__(self, text: str, source: str = "<string>", base_dir: Path | None = None):
        self.source = source
        self.base_dir = base_dir or Path(".")
        self.text = text
        self._lines = _line_index(text)
        parser = configparser.ConfigParser(interpolation=None, delimiters=("=",),
                                           comment_prefixes=("#", ";"),
                                           inline_comment_prefixes=("#", ";"),
                                           strict=True, empty_lines_in_values=False)
        parser.optionxform = str
        try:
            parser.read_string(text, source=source)
        except configparser.Error as exc:
            raise ScenarioError(f"{source}: parse failure: {exc.message.strip()}") from None
        if not parser.sections():
            raise ScenarioError(f"{source}: no sections found")
        self.sections: dict[str, dict[str, dict]] = {}
        for full in parser.sections():
            kind, _, name = full.partition(".")
            kind = kind.strip()
            if kind not in SCHEMAS:
                raise self.error(full, None, f"unknown section kind {kind!r}")
            if kind == "output":
                name = name or "default"
            elif not name:
                raise self.error(full, None, f"section needs a name: [{kind}.<name>]")
            schema = SCHEMAS[kind]
            values = {}
            for key, raw in parser.items(full):
                if key not in schema:
                    raise self.error(full, key, f"unknown key {key!r} for [{kind}.*]")
                try:
                    values[key] = schema[key](raw)
                except (ValueError, TypeError) as exc:
                    raise self.error(full, key, f"bad value for {key!r}: {exc}") from None
            for key in REQUIRED.get(kind, ()):
                if key not in values:
                    raise self.error(full, None, f"missing required key {key!r}")
            values["__section__"] = full
            self.sections.setdefault(kind, {})[name.strip()] = values
        self._check_refs()

    @classmethod
    def from_path(cls, path) -> "Scenario":
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ScenarioError(f"cannot read scenario file {path}: {exc.strerror}") from None
        return cls(text, source=str(path), base_dir=path.parent)

    def error(self, section, key, message) -> ScenarioError:
        line = self._lines.get((section, key)) or self._lines.get((section, None))
        where = f"{self.source}:{line}" if line else self.source
        return ScenarioError(f"{where}: [{section}] {message}")

    def _check_refs(self):
        for kind, named in self.sections.items():
            for values in named.values():
                for key, v in values.items():
                    refs = v if isinstance(v, list) else [v]
                    for r in refs:
                        if isinstance(r, _Ref) and r not in self.sections.get(r.kind, {}):
                            raise self.error(values["__section__"], key,
                                             f"unresolved reference {r.kind}.{r}")

    def named(self, kind: str) -> dict[str, dict]:
        return self.sections.get(kind, {})

    def get(self, kind: str, name: str) -> dict:
        return self.sections[kind][name]

    def output_option(self, key, default=None):
        return self.named("output").get("default", {}).get(key, default)

    def _build(self, values, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InvalidInputError as exc:
            raise self.error(values["__section__"], None, str(exc)) from None

    # builders -----------------------------------------------------------

    def propagation(self, name) -> propagation.PropagationModelParams:
        v = self.get("propagation", name)
        offset = v.get("clutter_offset_db")
        if offset is None:
            offset = propagation.CLUTTER_OFFSETS_DB[v["morphology"]] if "morphology" in v else 0.0
        return self._build(v, propagation.PropagationModelParams, v.get("frequency_mhz", 1800.0),
                           v["base_height_m"], v.get("mobile_height_m", 1.5), offset)

    def linkbudget(self, name) -> LinkBudgetScenario:
        v = self.get("linkbudget", name)
        kw = {k: val for k, val in v.items()
              if k not in ("__section__", "propagation", "modulation", "code_rate",
                           "max_tx_power_dbm")}
        mcs = self._build(v, Mcs, v.get("modulation", Modulation.QPSK), v.get("code_rate", 1.0))
        return self._build(v, LinkBudgetScenario, max_total_tx_power_dbm=v["max_tx_power_dbm"],
                           mcs=mcs, name=name, **kw)

    def linkbudget_propagation(self, name):
        ref = self.get("linkbudget", name).get("propagation")
        return self.propagation(ref) if ref else None

    def pair(self, name):
        v = self.get("pair", name)
        ul, dl = self.linkbudget(v["uplink"]), self.linkbudget(v["downlink"])
        if ul.direction is not Direction.UL or dl.direction is not Direction.DL:
            raise self.error(v["__section__"], None, "uplink must be a UL and downlink a DL budget")
        params = None
        if "propagation" in v:
            params = self.propagation(v["propagation"])
        else:
            params = self.linkbudget_propagation(v["uplink"]) or self.linkbudget_propagation(v["downlink"])
        return ul, dl, params

    def throughput(self, name) -> dimensioning.ThroughputConfig:
        v = self.get("throughput", name)
        cap = v.get("ue_category_cap_mbps")
        if cap is None and "ue_category" in v:
            cat = v["ue_category"].upper()
            if cat not in dimensioning.CATEGORY_CAPS_MBPS:
                raise self.error(v["__section__"], "ue_category", f"unknown UE category {cat!r}")
            cap = dimensioning.CATEGORY_CAPS_MBPS[cat][v.get("direction", Direction.DL).value]
        return self._build(v, dimensioning.ThroughputConfig, rb_count=v.get("rb_count", 100),
                           modulation_bits=v.get("modulation", Modulation.QAM64).bits_per_symbol,
                           code_rate=v.get("code_rate", 1.0), layers=v.get("layers", 1),
                           overhead_fraction=v.get("overhead_fraction", 0.0),
                           ue_category_cap_mbps=cap)

    def traffic(self, name, areas=None, subscribers=None) -> dimensioning.DimensioningInput:
        v = self.get("dimensioning", name)
        return self._build(
            v, dimensioning.DimensioningInput,
            avg_sector_throughput_mbps=v["avg_sector_throughput_mbps"],
            coverage_area_km2=areas or {}, subscribers=subscribers or {},
            dl_loading=v.get("dl_loading", 0.7), peak_to_avg_margin=v.get("peak_to_avg_margin", 0.2),
            per_subscriber_busy_hour_kbps=v.get("per_subscriber_busy_hour_kbps", 50.0),
            sectors_per_site=v.get("sectors_per_site", 3),
            geometry_factor=v.get("geometry_factor", dimensioning.TRI_SECTOR_CLOVER),
        )

    def hspa_config(self, name) -> hspa.HspaConfig:
        v = self.get("hspa", name)
        kw = {k: val for k, val in v.items() if k in _HSPA_FIELDS}
        return self._build(v, hspa.HspaConfig, **kw)

    def user_class(self, name) -> UserClass:
        v = self.get("userclass", name)
        return self._build(v, UserClass, v.get("label", name), arp=v["arp"], qci=v["qci"],
                           scheduling_weight=v["weight"], dscp_data=v["dscp_data"],
                           dscp_signaling=v.get("dscp_signaling", 46),
                           dscp_voice=v.get("dscp_voice", 46))

    def bearer(self, name, owner) -> Bearer:
        v = self.get("bearer", name)
        arp = self._build(v, Arp, v.get("arp_priority", 9), v.get("preemption_capable", False),
                          v.get("preemptable", True))
        demand = self._build(v, Demand, v.get("demand", DemandKind.FULL_BUFFER),
                             v.get("demand_rate_mbps", 0.0))
        return self._build(v, Bearer, owner, v["qci"], arp, v.get("gbr_mbps"), v.get("mbr_mbps"),
                           v.get("ambr_group"), v.get("ambr_mbps"), demand, name)

    def sim_user(self, name) -> SimUser:
        v = self.get("ue", name)
        return self._build(v, SimUser, name, v["weight"],
                           tuple(self.bearer(b, name) for b in v["bearers"]))

    def topology(self, name) -> latency.TopologyPath:
        v = self.get("topology", name)
        if "profile" in v:
            if "hops" in v:
                raise self.error(v["__section__"], "hops", "give either profile or hops, not both")
            base = latency.default_profiles()[v["profile"]]
            return self._build(v, latency.TopologyPath, name, base.hops,
                               v.get("radio_access_rtt_ms", base.radio_access_rtt_ms),
                               base.technology)
        if "hops" not in v:
            raise self.error(v["__section__"], None, "topology needs profile or hops")
        hops = []
        for h in v["hops"]:
            hv = self.get("hop", h)
            hops.append(self._build(hv, latency.Hop, hv.get("label", h),
                                    hv.get("processing_delay_ms", 0.0), hv["link_rate_mbps"],
                                    hv.get("propagation_delay_ms", 0.0), hv.get("segment")))
        return self._build(v, latency.TopologyPath, name, tuple(hops),
                           v.get("radio_access_rtt_ms", 0.0),
                           v.get("technology", latency.Technology.LTE_FULL))

    def budget_rule(self, name) -> latency.BudgetRule:
        v = self.get("budget", name)
        kw = {k: v[k] for k in ("s1_one_way_ms", "s1_access_share_ms", "s1_transport_share_ms",
                                "x2_one_way_ms") if k in v}
        return self._build(v, latency.BudgetRule, **kw)

    def resolve_path(self, relative: str) -> Path:
        p = Path(relative)
        return p if p.is_absolute() else self.base_dir / p
