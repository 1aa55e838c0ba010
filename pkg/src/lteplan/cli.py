"""Batch command line: ``lteplan <subcommand> --scenario FILE``.

Exit codes: 0 success, 1 validation error (bad arguments, scenario, input
values), 2 computation error (load saturation, solver failure, infeasible
schedule, golden mismatch). Warnings go to stderr only.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
import warnings
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from . import dimensioning, hspa, latency, propagation
from .errors import (
    ConvergenceError,
    InfeasibleScheduleError,
    InvalidInputError,
    SaturationError,
)
from .linkbudget import Direction, ShadowMode, build_link_budget, evaluate_pair
from .qos import (
    QosProfile,
    ProfileKind,
    default_registry,
    default_user_classes,
    expected_shares,
    map_qci_to_transport,
    read_qos_config,
    simulate_scheduler,
    write_qos_config,
)
from .reference import PRINTED, PRINTED_ROWS, SHORT_NAMES
from .report import Table, to_csv, to_text
from .scenario import Scenario, ScenarioError

COMMANDS = ("linkbudget", "radius", "loadcurve", "peak", "dimension", "hspa-compare", "qos-map",
            "qos-share", "qos-sim", "latency", "budget-check")

GOLDEN_FIXTURES = {"linkbudget": "reference_linkbudget.cfg", "qos-share": "reference_shares.cfg"}
GOLDEN_DB_TOL = 0.02
GOLDEN_KM_TOL = 0.02
GOLDEN_MBPS_TOL = 0.01
GOLDEN_SHARES = {"gold": (32.18, 59), "silver": (16.09, 29), "bronze": (6.44, 12)}


@dataclass
class RunReport:
    command: str
    argv: list[str]
    input_digest: str = ""
    tables: list[Table] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    exit_status: int = 0
    error: str = ""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="lteplan", description="LTE radio network planning batch toolkit.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--scenario", help="scenario file (optional only with --golden)")
    p.add_argument("--format", choices=("table", "csv"), default=None)
    p.add_argument("--out", help="write the report here instead of stdout")
    p.add_argument("--seed", type=int, default=None, help="RNG seed for qos-sim")
    p.add_argument("--golden", action="store_true",
                   help="compare against pinned reference values (linkbudget, qos-share)")
    p.add_argument("--config-out", help="qos-map: also write the QoS mapping document here")
    return p


def _require(sc, kind):
    named = sc.named(kind)
    if not named:
        raise ScenarioError(f"{sc.source}: no [{kind}.*] sections")
    return named


def _slope_for(sc, name):
    params = sc.linkbudget_propagation(name)
    return params.slope_db_per_decade if params else None


# ---------------------------------------------------------------- commands

def cmd_linkbudget(sc, args):
    names = list(_require(sc, "linkbudget"))
    results = []
    for n in names:
        scen = sc.linkbudget(n)
        if scen.shadow_mode is ShadowMode.JAKES_SOLVE and _slope_for(sc, n) is None:
            raise sc.error(sc.get("linkbudget", n)["__section__"], "shadow_mode",
                           "JakesSolve needs a propagation reference for the pathloss slope")
        results.append(build_link_budget(scen, _slope_for(sc, n)))
    t = Table("linkbudget", ["row"] + names)
    for row in results[0].rows():
        t.add(row, *[r.rows()[row] for r in results])
    return [t]


def _pair_results(sc, name):
    ul, dl, params = sc.pair(name)
    if params is None:
        raise sc.error(sc.get("pair", name)["__section__"], None, "no propagation model for radius")
    pr = evaluate_pair(ul, dl, params.slope_db_per_decade)
    return pr, params


def cmd_radius(sc, args):
    pairs = sc.named("pair")
    if pairs:
        t = Table("radius", ["pair", "morphology", "ul_mapl_db", "dl_mapl_db", "gap_db", "limiting",
                             "ul_radius_km", "dl_radius_km", "cell_radius_km"])
        for name in pairs:
            pr, params = _pair_results(sc, name)
            r_ul = propagation.invert_radius(params, pr.uplink.mapl_db)
            r_dl = propagation.invert_radius(params, pr.downlink.mapl_db)
            t.add(name, pr.uplink.scenario.morphology, pr.uplink.mapl_db, pr.downlink.mapl_db,
                  pr.gap_db, pr.limiting, r_ul, r_dl, min(r_ul, r_dl))
        return [t]
    t = Table("radius", ["linkbudget", "direction", "mapl_db", "radius_km"])
    for name in _require(sc, "linkbudget"):
        params = sc.linkbudget_propagation(name)
        if params is None:
            continue
        res = build_link_budget(sc.linkbudget(name), params.slope_db_per_decade)
        t.add(name, res.scenario.direction, res.mapl_db, propagation.invert_radius(params, res.mapl_db))
    if not t.rows:
        raise ScenarioError(f"{sc.source}: no pair or link budget with a propagation reference")
    return [t]


def cmd_loadcurve(sc, args):
    t = Table("loadcurve", ["curve", "load", "ul_radius_km", "dl_radius_km",
                            "ul_reduction", "dl_reduction"])
    for name, v in _require(sc, "loadcurve").items():
        ul, dl, params = sc.pair(v["pair"])
        if params is None:
            raise sc.error(v["__section__"], "pair", "pair has no propagation model")
        kw = dict(ul_coupling=v.get("ul_coupling_factor"), dl_coupling=v.get("dl_coupling_factor"))
        curves = propagation.load_radius_curve(ul, dl, params, v["loads"], **kw)
        base = propagation.load_radius_curve(ul, dl, params, [0.0], **kw)
        r0_ul, r0_dl = base[Direction.UL][0][1], base[Direction.DL][0][1]
        for (load, r_ul), (_, r_dl) in zip(curves[Direction.UL], curves[Direction.DL]):
            t.add(name, load, r_ul, r_dl, 1.0 - r_ul / r0_ul, 1.0 - r_dl / r0_dl)
    return [t]


def cmd_peak(sc, args):
    t = Table("peak", ["config", "raw_mbps", "cap_mbps", "peak_mbps"])
    for name in _require(sc, "throughput"):
        cfg = sc.throughput(name)
        raw = dimensioning.peak_phy_throughput(
            dimensioning.ThroughputConfig(**{**cfg.__dict__, "ue_category_cap_mbps": None}))
        t.add(name, raw, cfg.ue_category_cap_mbps, dimensioning.peak_phy_throughput(cfg))
    return [t]


def _region_radius(sc, region):
    v = sc.get("region", region)
    if "radius_km" in v:
        return v["radius_km"]
    if "pair" not in v:
        raise sc.error(v["__section__"], None, "region needs radius_km or pair")
    pr, params = _pair_results(sc, v["pair"])
    return propagation.invert_radius(params, pr.limiting_mapl_db)


def cmd_dimension(sc, args):
    t = Table("dimension", ["plan", "region", "cell_radius_km", "area_km2", "subscribers",
                            "coverage_sites", "subscribers_per_sector", "capacity_sites",
                            "required_sites", "limited_by"])
    for name, v in _require(sc, "dimensioning").items():
        if "regions" not in v:
            raise sc.error(v["__section__"], None, "missing required key 'regions'")
        areas, subs, radii = {}, {}, {}
        for region in v["regions"]:
            rv = sc.get("region", region)
            areas[region], subs[region] = rv["area_km2"], rv["subscribers"]
            radii[region] = _region_radius(sc, region)
        plan = dimensioning.dimension_network(sc.traffic(name, areas, subs), radii)
        for m in plan.morphologies:
            t.add(name, m.morphology, m.cell_radius_km, m.area_km2, m.subscribers, m.coverage_sites,
                  m.subscribers_per_sector, m.capacity_sites, m.required_sites, m.limited_by)
        t.add(name, "total", None, sum(areas.values()), sum(subs.values()), plan.coverage_sites,
              None, plan.capacity_sites, plan.required_sites, None)
    return [t]


def cmd_hspa_compare(sc, args):
    tables = []
    comps = sc.named("comparison")
    if comps:
        t = Table("efficiency", ["comparison", "lte_efficiency", "hspa_normalized_mbps",
                                 "hspa_efficiency", "gain", "lte_subscribers_per_sector",
                                 "hspa_subscribers_per_sector"])
        for name, v in comps.items():
            traffic = sc.traffic(v["dimensioning"]) if "dimensioning" in v else None
            kw = {k: v[k] for k in ("lte_throughput_mbps", "lte_bandwidth_mhz", "hspa_measured_mbps",
                                    "hspa_scheduling_rate", "hspa_bandwidth_mhz") if k in v}
            c = dimensioning.compare_lte_hspa(traffic=traffic, **kw)
            t.add(name, c.lte_efficiency, c.hspa_normalized_mbps, c.hspa_efficiency, c.gain,
                  c.lte_subscribers_per_sector, c.hspa_subscribers_per_sector)
        tables.append(t)
    configs = sc.named("hspa")
    if configs:
        users_t = Table("hspa_users", ["config", "users", "per_user_power_dbm", "dl_mapl_db", "radius_km"])
        load_t = Table("hspa_load", ["config", "load", "ul_radius_km", "dl_radius_km"])
        summ_t = Table("hspa_summary", ["config", "edge_radius_km", "max_users_at_edge",
                                        "dl_full_load_radius_ratio", "dl_coupling_factor"])
        for name, v in configs.items():
            cfg = sc.hspa_config(name)
            rate = v.get("cell_edge_rate_kbps", 512.0)
            series = hspa.hspa_radius_vs_users(cfg, v.get("users", range(1, 13)), rate)
            for n, r in series:
                users_t.add(name, n, hspa.per_user_power_dbm(cfg, n),
                            hspa.dl_mapl(cfg, n, cell_edge_rate_kbps=rate), r)
            curves = hspa.hspa_load_radius_curve(cfg, v.get("loads", [0.0, 0.25, 0.5, 0.75, 0.9, 1.0]))
            for (load, r_ul), (_, r_dl) in zip(curves[Direction.UL], curves[Direction.DL]):
                load_t.add(name, load, r_ul, r_dl)
            ends = hspa.hspa_load_radius_curve(cfg, [0.0, 1.0])[Direction.DL]
            edge = v.get("edge_radius_km", 0.2)
            summ_t.add(name, edge, hspa.max_users_within(series, edge), ends[1][1] / ends[0][1],
                       cfg.dl_coupling_factor)
        tables += [users_t, load_t, summ_t]
    if not tables:
        raise ScenarioError(f"{sc.source}: no [comparison.*] or [hspa.*] sections")
    return tables


def _qos_profile(sc, name):
    v = sc.get("qos", name)
    kind = ProfileKind(v.get("profile", "application"))
    registry, classes = default_registry(), []
    if "mapping" in v:
        registry, classes = read_qos_config(sc.resolve_path(v["mapping"]))
    if "user_classes" in v:
        classes = [sc.user_class(u) for u in v["user_classes"]]
    if kind is ProfileKind.INTER_USER and not classes:
        classes = default_user_classes()
    return QosProfile(kind, registry, tuple(classes))


def cmd_qos_map(sc, args):
    named = _require(sc, "qos")
    t = Table("qos_map", ["profile", "qci", "resource_type", "priority", "pdb_ms", "plr", "dscp",
                          "mw_queue", "service"])
    for name in named:
        prof = _qos_profile(sc, name)
        for r in prof.registry.records:
            dscp, queue = map_qci_to_transport(r.qci, prof)
            t.add(name, r.qci, r.resource_type, r.priority, r.packet_delay_budget_ms,
                  float(r.packet_loss_rate), dscp, queue, r.service_sample)
    if args.config_out:
        if len(named) != 1:
            raise ScenarioError("--config-out needs exactly one [qos.*] section")
        prof = _qos_profile(sc, next(iter(named)))
        write_qos_config(args.config_out, prof.registry, prof.user_classes)
    return [t]


def cmd_qos_share(sc, args):
    t = Table("qos_share", ["share", "label", "weight", "share_mbps", "percent", "percent_rounded"])
    for name, v in _require(sc, "share").items():
        weights = v["weights"]
        labels = v.get("labels") or [f"user{i + 1}" for i in range(len(weights))]
        if len(labels) != len(weights):
            raise sc.error(v["__section__"], "labels", "labels and weights differ in length")
        try:
            shares, fractions = expected_shares(weights, v["total_mbps"])
        except InvalidInputError as exc:
            raise sc.error(v["__section__"], None, str(exc)) from None
        for label, w, s, f in zip(labels, weights, shares, fractions):
            t.add(name, label, w, s, 100.0 * f, int(round(100.0 * f)))
    return [t]


def cmd_qos_sim(sc, args):
    t = Table("qos_sim", ["simulation", "user", "weight", "achieved_mbps", "weighted_share_mbps"])
    for name, v in _require(sc, "simulation").items():
        users = [sc.sim_user(u) for u in v["users"]]
        seed = args.seed if args.seed is not None else v.get("seed", 0)
        res = simulate_scheduler(users, v["capacity_mbps"], v["tti_count"], seed)
        ref, _ = expected_shares([u.weight for u in users], v["capacity_mbps"])
        for u, r in zip(users, ref):
            t.add(name, u.name, u.weight, res.achieved_mbps[u.name], r)
    return [t]


def cmd_latency(sc, args):
    rtt_t = Table("rtt", ["topology", "size_bytes", "rtt_ms"])
    sum_t = Table("rtt_summary", ["topology", "technology", "spread_ms", "mean_ms", "slope_ms_per_byte"])
    for name, v in _require(sc, "topology").items():
        path = sc.topology(name)
        sweep = latency.rtt_sweep(path, v.get("sizes", latency.PING_SIZES_BYTES))
        for s, r in zip(sweep.sizes, sweep.rtt_ms):
            rtt_t.add(name, s, r)
        sum_t.add(name, path.technology, sweep.spread_ms, sweep.mean_ms,
                  latency.rtt_slope_ms_per_byte(path))
    return [rtt_t, sum_t]


def cmd_budget_check(sc, args):
    tables = []
    budgets = sc.named("budget")
    if budgets:
        t = Table("budget", ["budget", "interface", "passed", "one_way_ms", "limit_ms", "access_ms",
                             "transport_ms", "max_cascaded_links", "violations"])
        hops_t = Table("budget_hops", ["budget", "hop", "one_way_ms"])
        for name, v in budgets.items():
            path = sc.topology(v["path"])
            interface = v.get("interface", latency.Interface.S1)
            if interface is latency.Interface.X2 and "x2_peer" in v:
                if "cross_connect" not in v:
                    raise sc.error(v["__section__"], "x2_peer", "x2_peer needs cross_connect")
                path = latency.x2_path(path, sc.topology(v["x2_peer"]), v["cross_connect"])
            rule = sc.budget_rule(name)
            rep = latency.validate_budget(path, rule, interface,
                                          v.get("reference_size_bytes", latency.REFERENCE_SIZE_BYTES))
            cascade = rep.max_cascaded_links
            if "per_link_delay_ms" in v:
                cascade = latency.max_cascaded_links(rule.s1_transport_share_ms, v["per_link_delay_ms"])
            t.add(name, rep.interface, rep.passed, rep.one_way_ms, rep.limit_ms,
                  rep.per_segment_ms["access"], rep.per_segment_ms["transport"], cascade,
                  "; ".join(rep.violations))
            for label, d in rep.per_hop_ms:
                hops_t.add(name, label, d)
        tables += [t, hops_t]
    anc = sc.named("ancillary")
    if anc:
        t = Table("ancillary", ["name", "s1u_mbps", "x2_mbps", "s1_mme_mbps"])
        for name, v in anc.items():
            a = latency.ancillary_bandwidth(v["s1u_mbps"], v.get("x2_fraction", 0.04),
                                            v.get("control_fraction", 0.02))
            t.add(name, v["s1u_mbps"], a.x2_mbps, a.s1_mme_mbps)
        tables.append(t)
    if not tables:
        raise ScenarioError(f"{sc.source}: no [budget.*] or [ancillary.*] sections")
    return tables


HANDLERS = {
    "linkbudget": cmd_linkbudget, "radius": cmd_radius, "loadcurve": cmd_loadcurve,
    "peak": cmd_peak, "dimension": cmd_dimension, "hspa-compare": cmd_hspa_compare,
    "qos-map": cmd_qos_map, "qos-share": cmd_qos_share, "qos-sim": cmd_qos_sim,
    "latency": cmd_latency, "budget-check": cmd_budget_check,
}


# ------------------------------------------------------------------ golden

def golden_linkbudget(sc):
    t = Table("golden_linkbudget", ["column", "row", "computed", "expected", "tolerance", "passed"])
    morph_of = {v: k for k, v in SHORT_NAMES.items()}
    for name in _require(sc, "linkbudget"):
        short, _, direction = name.rpartition("_")
        key = (morph_of.get(short), Direction(direction.upper()) if direction in ("ul", "dl") else None)
        if key not in PRINTED:
            continue
        res = build_link_budget(sc.linkbudget(name))
        params = sc.linkbudget_propagation(name)
        computed = [res.subcarrier_power_dbm, res.eirp_per_subcarrier_dbm,
                    res.receiver_sensitivity_dbm, res.min_reception_strength_dbm, res.mapl_db,
                    propagation.invert_radius(params, res.mapl_db) if params else None]
        for row, c, e in zip(PRINTED_ROWS, computed, PRINTED[key]):
            if c is None:
                continue
            tol = GOLDEN_KM_TOL if row == "radius_km" else GOLDEN_DB_TOL
            t.add(name, row, c, e, tol, abs(c - e) <= tol)
    if not t.rows:
        raise ScenarioError(f"{sc.source}: no reference link budget columns found")
    return t


def golden_shares(sc):
    t = Table("golden_shares", ["label", "share_mbps", "expected_mbps", "percent_rounded",
                                "expected_percent", "passed"])
    rows = cmd_qos_share(sc, None)[0].rows
    for _, label, _, share, _, pct in rows:
        exp = GOLDEN_SHARES.get(label.lower())
        if exp is None:
            continue
        t.add(label, share, exp[0], pct, exp[1], abs(share - exp[0]) <= GOLDEN_MBPS_TOL and pct == exp[1])
    if not t.rows:
        raise ScenarioError(f"{sc.source}: no gold/silver/bronze shares found")
    return t


def golden_fixture_path(command: str) -> Path:
    return Path(str(resources.files("lteplan") / "data" / GOLDEN_FIXTURES[command]))


# -------------------------------------------------------------------- main

def run(argv=None, stdout=None, stderr=None) -> RunReport:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    report = RunReport(args.command, argv)
    try:
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            if args.golden:
                if args.command not in GOLDEN_FIXTURES:
                    raise ScenarioError(f"no golden fixture for {args.command!r}")
                path = Path(args.scenario) if args.scenario else golden_fixture_path(args.command)
            elif not args.scenario:
                raise ScenarioError("--scenario is required")
            else:
                path = Path(args.scenario)
            sc = Scenario.from_path(path)
            report.input_digest = hashlib.sha256(sc.text.encode("utf-8")).hexdigest()
            fmt = args.format or sc.output_option("format", "table")
            if fmt not in ("table", "csv"):
                raise ScenarioError(f"unknown output format {fmt!r}")
            if args.golden:
                golden = golden_linkbudget if args.command == "linkbudget" else golden_shares
                report.tables = [golden(sc)]
            else:
                report.tables = HANDLERS[args.command](sc, args)
        for w in caught:
            msg = str(w.message)
            if msg not in report.warnings:
                report.warnings.append(msg)
        if args.golden and not all(row[-1] for row in report.tables[0].rows):
            report.exit_status = 2
            report.error = "golden comparison failed"
    except (SaturationError, ConvergenceError, InfeasibleScheduleError) as exc:
        report.exit_status, report.error = 2, str(exc)
    except (InvalidInputError, OSError, KeyError) as exc:
        report.exit_status, report.error = 1, str(exc).strip("'\"")

    for msg in report.warnings:
        print(f"warning: {msg}", file=stderr)
    if report.error:
        print(f"error: {report.error}", file=stderr)
    if report.tables and report.exit_status in (0, 2):
        if fmt == "csv":
            text = to_csv(report.tables)
        else:
            header = f"# lteplan {report.command}  scenario sha256 {report.input_digest[:16]}\n\n"
            text = header + to_text(report.tables, sc.output_option("precision", 3))
        if args.out:
            try:
                Path(args.out).write_text(text, encoding="utf-8", newline="\n")
            except OSError as exc:
                print(f"error: cannot write {args.out}: {exc.strerror}", file=stderr)
                report.exit_status = 1
        else:
            stdout.write(text)
    return report


def main(argv=None) -> int:
    return run(argv).exit_status


if __name__ == "__main__":
    sys.exit(main())
