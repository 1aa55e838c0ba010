import math
from dataclasses import replace

import pytest
from hypothesis import given, settings, strategies as st

from lteplan import dimensioning as dm
from lteplan import hspa
from lteplan.errors import InvalidInputError
from lteplan.linkbudget import Direction


def test_peak_throughput_examples():
    cfg = dm.ThroughputConfig(100, 6, 1.0, 2, 0.0)
    assert dm.peak_phy_throughput(cfg) == pytest.approx(201.6)
    with_ovh = replace(cfg, overhead_fraction=0.25)
    assert dm.peak_phy_throughput(with_ovh) == pytest.approx(151.2)
    assert abs(dm.peak_phy_throughput(with_ovh) - 150) / 150 < 0.01
    capped = replace(cfg, ue_category_cap_mbps=dm.CATEGORY_CAPS_MBPS["CAT3"]["DL"])
    assert dm.peak_phy_throughput(capped) == 102.0
    assert abs(102.0 - 100) / 100 <= 0.02


def test_throughput_config_validation():
    for bad in (dict(overhead_fraction=1.0), dict(layers=3), dict(code_rate=0.0), dict(modulation_bits=3)):
        with pytest.raises(InvalidInputError):
            dm.ThroughputConfig(**bad)


@settings(max_examples=80, deadline=None)
@given(rb=st.integers(1, 100), bits=st.sampled_from([2, 4, 6]), rate=st.floats(0.05, 1.0),
       layers=st.sampled_from([1, 2]), ovh=st.floats(0, 0.9))
def test_peak_throughput_oracle_and_linearity(rb, bits, rate, layers, ovh):
    cfg = dm.ThroughputConfig(rb, bits, rate, layers, ovh)
    raw = rb * 12 * 14 * bits * rate * layers * (1 - ovh) / 1000
    assert dm.peak_phy_throughput(cfg) == pytest.approx(raw, rel=1e-12)
    if layers == 1:
        assert dm.peak_phy_throughput(replace(cfg, layers=2)) == pytest.approx(2 * raw, rel=1e-12)
    half = replace(cfg, code_rate=rate / 2)
    assert dm.peak_phy_throughput(half) == pytest.approx(raw / 2, rel=1e-12)


def test_normalize_and_efficiency():
    assert dm.normalize_throughput(9.0, 0.73) == pytest.approx(12.33, abs=0.01)
    assert dm.normalize_throughput(33.0, 1.0) == 33.0
    with pytest.raises(InvalidInputError):
        dm.normalize_throughput(9.0, 0.0)
    assert dm.spectral_efficiency(33, 20) == pytest.approx(1.65)
    assert dm.spectral_efficiency(12.3, 10) == pytest.approx(1.23)
    assert dm.efficiency_gain(1.65, 1.23) == pytest.approx(0.3415, abs=1e-4)


def test_compare_lte_hspa():
    c = dm.compare_lte_hspa()
    assert (c.lte_efficiency, c.hspa_efficiency) == pytest.approx((1.65, 1.23))
    assert c.gain == pytest.approx(0.3415, abs=1e-3)
    unrounded = dm.compare_lte_hspa(hspa_round_mbps=None)
    assert unrounded.hspa_normalized_mbps == pytest.approx(12.3288, abs=1e-4)
    traffic = dm.DimensioningInput(33.0, {}, {})
    c = dm.compare_lte_hspa(traffic=traffic)
    assert (c.lte_subscribers_per_sector, c.hspa_subscribers_per_sector) == (385, 143)


def test_subscribers_per_sector_examples():
    assert dm.subscribers_per_sector(33, 0.7, 0.2, 50) == 385
    assert dm.subscribers_per_sector(33, 1.0, 0.0, 50) == 660
    assert dm.subscribers_per_sector(12.3, 0.7, 0.2, 50) == 143
    with pytest.raises(InvalidInputError):
        dm.subscribers_per_sector(33, 0.7, 0.2, 0)


@settings(max_examples=80, deadline=None)
@given(t=st.floats(1, 300), load=st.floats(0.05, 1.0), margin=st.floats(0, 1), per=st.floats(5, 500),
       k=st.floats(1.0, 1.5))
def test_subscribers_per_sector_monotone(t, load, margin, per, k):
    base = dm.subscribers_per_sector(t, load, margin, per)
    assert dm.subscribers_per_sector(t * k, load, margin, per) >= base
    assert dm.subscribers_per_sector(t, min(load * k, 1.0), margin, per) >= base
    assert dm.subscribers_per_sector(t, load, margin * k + 0.01, per) <= base
    assert dm.subscribers_per_sector(t, load, margin, per * k) <= base


def test_site_counts():
    assert dm.coverage_site_count(19.49, 1.0, 1.949) == 10
    assert dm.coverage_site_count(100, 0.87, 1.949) == 68
    assert dm.coverage_site_count(1, 10, dm.OMNI_HEXAGON) == 1
    assert dm.capacity_site_count(115500, 385, 3) == 100
    assert dm.capacity_site_count(1, 385, 3) == 1
    assert dm.capacity_site_count(0, 385, 3) == 0
    with pytest.raises(InvalidInputError):
        dm.coverage_site_count(10, 0, 1.949)


def test_dimension_network_max_semantics():
    inp = dm.DimensioningInput(33.0, {"town": 0.5, "farm": 5000.0}, {"town": 200000, "farm": 100})
    plan = dm.dimension_network(inp, {"town": 0.87, "farm": 7.5})
    town, farm = plan.morphologies
    assert town.required_sites == town.capacity_sites > town.coverage_sites
    assert town.limited_by == "capacity"
    assert farm.required_sites == farm.coverage_sites > farm.capacity_sites
    assert plan.required_sites == town.required_sites + farm.required_sites
    with pytest.raises(InvalidInputError):
        dm.dimension_network(inp, {"town": 1.0})


@settings(max_examples=50, deadline=None)
@given(subs=st.integers(0, 10**6), extra=st.integers(0, 10**5), area=st.floats(0.1, 1000))
def test_dimension_network_monotone_in_subscribers(subs, extra, area):
    def plan(n):
        return dm.dimension_network(dm.DimensioningInput(33.0, {"a": area}, {"a": n}), {"a": 1.0})
    a, b = plan(subs).morphologies[0], plan(subs + extra).morphologies[0]
    assert b.required_sites >= a.required_sites
    assert a.required_sites >= max(a.coverage_sites, a.capacity_sites)


# ---------------------------------------------------------------- HSPA+

@pytest.fixture
def cfg():
    return hspa.HspaConfig()


pytestmark = pytest.mark.filterwarnings("ignore::lteplan.errors.ModelValidityWarning")


def test_hspa_radius_vs_users(cfg):
    series = hspa.hspa_radius_vs_users(cfg, range(1, 13))
    radii = [r for _, r in series]
    assert all(b < a for a, b in zip(radii, radii[1:]))
    n = hspa.max_users_within(series, 0.2)
    assert 1 <= n <= 9
    assert n == 6
    first_below = next(u for u, r in series if r < 0.2)
    assert first_below == 7


def test_hspa_doubling_users_costs_3db(cfg):
    assert hspa.dl_mapl(cfg, 2) - hspa.dl_mapl(cfg, 4) == pytest.approx(10 * math.log10(2))


@settings(max_examples=30, deadline=None)
@given(u=st.integers(1, 50), v=st.integers(1, 50))
def test_hspa_log_radius_linear_in_log_users(u, v):
    cfg = hspa.HspaConfig()
    (_, ru), (_, rv) = hspa.hspa_radius_vs_users(cfg, [u, v])
    slope = cfg.propagation.slope_db_per_decade
    expected = -10 * math.log10(v / u) / slope
    assert math.log10(rv) - math.log10(ru) == pytest.approx(expected, abs=1e-9)


def test_hspa_load_curve(cfg):
    c = hspa.hspa_load_radius_curve(cfg, [0.0, 0.5, 0.9, 0.99, 1.0])
    ul = dict(c[Direction.UL])
    dl = dict(c[Direction.DL])
    assert ul[1.0] == 0.0
    assert ul[0.99] < ul[0.9] < ul[0.5] < ul[0.0]
    assert dl[1.0] / dl[0.0] == pytest.approx(0.55, abs=0.05)
    assert hspa.ul_mapl(cfg, 0.0) - hspa.ul_mapl(cfg, 0.5) == pytest.approx(10 * math.log10(2))
    with pytest.raises(InvalidInputError):
        hspa.hspa_load_radius_curve(cfg, [1.5])


def test_hspa_calibration_reproduces_defaults(cfg):
    cal = hspa.calibrate_profile()
    assert cal.dl_coupling_factor == pytest.approx(cfg.dl_coupling_factor, abs=1e-4)
    assert cal.dl_required_sinr_db == pytest.approx(cfg.dl_required_sinr_db, abs=0.1)
    assert cal.ul_required_sinr_db == pytest.approx(cfg.ul_required_sinr_db, abs=0.1)


def test_hspa_config_validation():
    with pytest.raises(InvalidInputError):
        hspa.HspaConfig(pa_total_power_w=0)
    with pytest.raises(InvalidInputError):
        hspa.HspaConfig(common_channel_overhead_fraction=1.0)
    with pytest.raises(InvalidInputError):
        hspa.per_user_power_dbm(hspa.HspaConfig(), 0)
