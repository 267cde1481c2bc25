"""Acceptance gate. Run ``pytest tests/test_acceptance.py`` for the per-criterion summary."""

from __future__ import annotations

import io
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracle
from strategies import factors, schedules, year_matrices
from gva_scenarios.analytics import annual_growth, build_growth_table, default_rows, yoy_growth
from gva_scenarios.core import (
    BUILTIN_GROUPS,
    PRIMARY,
    QUARTERS,
    SECONDARY,
    SECTORS,
    TERTIARY,
    TOTAL,
    FiscalQuarter,
    GvaMatrix,
    annual_total,
    merge,
    quarter_total,
)
from gva_scenarios.ingest import ShockSpec, UtilizationSchedule, parse_gva_table_csv
from gva_scenarios.nowcast import estimate_quarter
from gva_scenarios.report import format_percent, render_gva_table, render_growth_table
from gva_scenarios.scenario import project_fiscal_year
from gva_scenarios.validate import check_growth, check_levels

criterion = pytest.mark.criterion
PROPS = settings(max_examples=100, deadline=None)
MEMBER_GROUPS = {"PRIMARY": PRIMARY, "SECONDARY": SECONDARY, "TERTIARY": TERTIARY, "TOTAL": TOTAL}


def _report(check):
    return "; ".join(f"{c.row}/{c.col} expected {c.expected} got {c.actual}" for c in check.failures)


@criterion(1, "scenario-1 projected levels within 0.01")
def test_scenario_one_levels(pipeline, fixtures):
    check = check_levels("s1", fixtures["golden_levels_2020_21_s1"], pipeline.scenario1, 2020, lambda r, c: 0.01)
    assert len(check.cells) == 45
    assert check.passed, _report(check)
    assert annual_total(pipeline.scenario1, TOTAL, 2020) == pytest.approx(10133061.83, abs=0.01)


@criterion(2, "scenario-2 projected levels at printed precision, grand total within 1")
def test_scenario_two_levels(pipeline, fixtures):
    golden = fixtures["golden_levels_2020_21_s2"]

    def tol(row, col):
        if (row, col) == ("TOTAL", "total"):
            return 1.0
        return 0.5 * 10.0 ** -golden.decimals(row, col) + 1e-6

    check = check_levels("s2", golden, pipeline.scenario2, 2020, tol)
    assert check.passed, _report(check)
    assert annual_total(pipeline.scenario2, TOTAL, 2020) == pytest.approx(9875668, abs=1)


@criterion(3, "scenario growth tables match every printed integer percent")
@pytest.mark.parametrize("scenario,golden,bottom", [
    ("scenario1", "golden_growth_2020_21_s1", "-55%,-33%,-5%,3%,-23%"),
    ("scenario2", "golden_growth_2020_21_s2", "-55%,-33%,-12%,2%,-25%"),
])
def test_scenario_growth(pipeline, fixtures, scenario, golden, bottom):
    m = getattr(pipeline, scenario)
    check = check_growth(scenario, fixtures[golden], m, 2020, 0, 0.0)
    assert len(check.cells) == 45
    assert check.passed, _report(check)
    text = render_growth_table(build_growth_table(m, 2020), 0)
    assert text.splitlines()[-1] == "TOTAL," + bottom


@criterion(4, "nowcast Q4 cells and annual total within 0.5")
def test_nowcast_q4_cells(pipeline, fixtures):
    golden = fixtures["golden_levels_2019_20"]
    check = check_levels("t2", golden, pipeline.actuals, 2019, lambda r, c: 0.5)
    q4 = [c for c in check.cells if c.col == "q4"]
    assert len(q4) == 9
    assert all(c.ok for c in q4), "; ".join(f"{c.row} {c.expected} vs {c.actual}" for c in q4 if not c.ok)


@criterion(4, "nowcast Q4 cells and annual total within 0.5")
def test_nowcast_annual_total(pipeline):
    assert annual_total(pipeline.actuals, TOTAL, 2019) == pytest.approx(13109763, abs=0.5)


@criterion(5, "base-year growth within 0.1pp, total annual 2.3%")
def test_base_year_growth(pipeline, fixtures):
    check = check_growth("t3", fixtures["golden_growth_2019_20"], pipeline.actuals, 2019, 1, 0.1)
    assert check.passed, _report(check)
    assert format_percent(annual_growth(pipeline.actuals, TOTAL, 2019), 1) == "2.3%"


@criterion(6, "headline annual contractions")
def test_headlines(pipeline):
    assert -0.2275 <= annual_growth(pipeline.scenario1, TOTAL, 2020) <= -0.2265
    assert -0.2470 <= annual_growth(pipeline.scenario2, TOTAL, 2020) <= -0.2460


# Criterion 7: properties over random matrices (levels in [1, 1e7], factors in [0, 1.2]).

def _same_quarters(a: GvaMatrix, b: GvaMatrix) -> bool:
    return {(s, fq.q): v for (s, fq), v in a.items()} == {(s, fq.q): v for (s, fq), v in b.items()}


@criterion(7, "property suite")
@PROPS
@given(year_matrices())
def test_prop_identity_schedule(m):
    assert _same_quarters(project_fiscal_year(m, 2019, 2020, UtilizationSchedule.identity()), m)


@criterion(7, "property suite")
@PROPS
@given(year_matrices(), schedules(), st.data())
def test_prop_schedule_monotonicity(m, lo, data):
    hi = UtilizationSchedule({k: u + data.draw(st.floats(0, 1.2 - u, allow_subnormal=False)) for k, u in lo.factors.items()})
    a, b = project_fiscal_year(m, 2019, 2020, lo), project_fiscal_year(m, 2019, 2020, hi)
    assert all(a[k] <= b[k] for k in a)
    for g in BUILTIN_GROUPS.values():
        assert all(quarter_total(a, g, FiscalQuarter(2020, q)) <= quarter_total(b, g, FiscalQuarter(2020, q)) for q in QUARTERS)
        assert annual_total(a, g, 2020) <= annual_total(b, g, 2020)


@criterion(7, "property suite")
@PROPS
@given(year_matrices(), schedules(), st.floats(min_value=1e-3, max_value=1e3), st.floats(-0.9, 0.9))
def test_prop_homogeneity(m, sched, c, g):
    p, pc = project_fiscal_year(m, 2019, 2020, sched), project_fiscal_year(m.scaled(c), 2019, 2020, sched)
    assert all(math.isclose(pc[k], c * v, rel_tol=1e-12) for k, v in p.items())
    target = FiscalQuarter(2020, 2)
    n, nc = estimate_quarter(m, target, ShockSpec.uniform(g)), estimate_quarter(m.scaled(c), target, ShockSpec.uniform(g))
    assert all(math.isclose(nc[k], c * v, rel_tol=1e-12) for k, v in n.items())


@criterion(7, "property suite")
@PROPS
@given(year_matrices(fys=(2019, 2020)), st.floats(min_value=1e-3, max_value=1e3))
def test_prop_growth_scale_invariance(m, c):
    rows = default_rows(groups=True)
    a, b = build_growth_table(m, 2020, rows), build_growth_table(m.scaled(c), 2020, rows)
    assert all(math.isclose(1 + b[k], 1 + g, rel_tol=1e-12) for k, g in a.cells.items())


@criterion(7, "property suite")
@PROPS
@given(year_matrices(fys=(2019, 2020)))
def test_prop_weighted_mean_bound(m):
    for group in BUILTIN_GROUPS.values():
        for q in QUARTERS:
            fq = FiscalQuarter(2020, q)
            g = yoy_growth(m, group, fq)
            member = {s: yoy_growth(m, s, fq) for s in group.members}
            prior = quarter_total(m, group, fq.prev_year())
            mean = sum(m[(s, fq.prev_year())] / prior * gs for s, gs in member.items())
            slack = 1e-12 * (1 + max(map(abs, member.values())))
            assert min(member.values()) - slack <= g <= max(member.values()) + slack
            assert math.isclose(1 + g, 1 + mean, rel_tol=1e-9)


@criterion(7, "property suite")
@PROPS
@given(year_matrices())
def test_prop_additivity(m):
    for q in QUARTERS:
        fq = FiscalQuarter(2019, q)
        parts = quarter_total(m, PRIMARY, fq) + quarter_total(m, SECONDARY, fq) + quarter_total(m, TERTIARY, fq)
        assert quarter_total(m, TOTAL, fq) == parts
    q = [quarter_total(m, TOTAL, FiscalQuarter(2019, i)) for i in QUARTERS]
    assert annual_total(m, TOTAL, 2019) == ((q[0] + q[1]) + q[2]) + q[3]


@criterion(7, "property suite")
@PROPS
@given(year_matrices())
def test_prop_render_round_trip(m):
    back = parse_gva_table_csv(io.StringIO(render_gva_table(m, 2019)), 2019)
    assert back.keys() == m.keys()
    assert all(abs(back[k] - v) <= 0.005 + 1e-9 for k, v in m.items())


@criterion(7, "property suite")
@PROPS
@given(year_matrices(fys=(2019, 2020)))
def test_prop_deterministic_rendering(m):
    copy = GvaMatrix(dict(m))
    assert render_gva_table(m, 2020).encode() == render_gva_table(copy, 2020).encode()
    t1 = build_growth_table(m, 2020, default_rows(groups=True))
    t2 = build_growth_table(copy, 2020, default_rows(groups=True))
    assert render_growth_table(t1, 1).encode() == render_growth_table(t2, 1).encode()


@criterion(8, "engine agrees with an independent straight-loop recomputation")
@PROPS
@given(year_matrices(), schedules())
def test_oracle_equivalence(m, sched):
    base, u = oracle.to_plain(m), oracle.schedule_plain(sched)
    expected = {**base, **oracle.project(base, 2019, 2020, u)}
    full = merge(m, project_fiscal_year(m, 2019, 2020, sched))
    got = oracle.to_plain(full)

    def close(a, b):
        return math.isclose(a, b, rel_tol=1e-12, abs_tol=0.0) or a == b

    assert got.keys() == expected.keys()
    assert all(close(got[k], expected[k]) for k in expected)
    for name, group in MEMBER_GROUPS.items():
        codes = sorted(s.value for s in group.members)
        for q in QUARTERS:
            fq = FiscalQuarter(2020, q)
            assert close(quarter_total(full, group, fq), oracle.quarter_sum(expected, codes, 2020, q))
            assert close(1 + yoy_growth(full, group, fq), 1 + oracle.growth(expected, codes, 2020, q)), name
        assert close(annual_total(full, group, 2020), oracle.annual_sum(expected, codes, 2020))
        assert close(1 + annual_growth(full, group, 2020), 1 + oracle.growth(expected, codes, 2020))
