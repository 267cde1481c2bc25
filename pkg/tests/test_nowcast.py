from __future__ import annotations

import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strategies import year_matrices
from gva_scenarios.core import QUARTERS, SECTORS, TOTAL, FiscalQuarter, GvaMatrix, SectorId, annual_total, merge, quarter_total
from gva_scenarios.errors import MultipleMissing, NothingMissing, PartialYear
from gva_scenarios.ingest import ShockSpec
from gva_scenarios.nowcast import complete_fiscal_year, estimate_quarter, missing_quarters

Q4 = FiscalQuarter(2019, 4)
shock_values = st.floats(min_value=-0.9, max_value=0.9, allow_nan=False)


@pytest.fixture(scope="module")
def base(fixtures):
    return merge(fixtures["actuals_2019_20_q1q3"], fixtures["actuals_2018_19"])


class TestEstimateQuarter:
    def test_agriculture_unchanged(self, fixtures):
        est = estimate_quarter(fixtures["actuals_2018_19"], Q4, fixtures["shock_q4_fy2019"])
        assert est[(SectorId.AGR, Q4)] == 486094

    def test_mining_contracts_six_percent(self, fixtures):
        est = estimate_quarter(fixtures["actuals_2018_19"], Q4, fixtures["shock_q4_fy2019"])
        assert est[(SectorId.MIN, Q4)] == pytest.approx(107147, abs=0.5)

    def test_zero_shock_is_identity(self, fixtures):
        prior = fixtures["actuals_2018_19"]
        est = estimate_quarter(prior, Q4, ShockSpec.uniform(0.0))
        for s in SECTORS:
            assert est[(s, Q4)] == prior[(s, FiscalQuarter(2018, 4))]

    def test_single_quarter_all_estimated(self, fixtures):
        est = estimate_quarter(fixtures["actuals_2018_19"], Q4, fixtures["shock_q4_fy2019"])
        assert len(est) == 8
        assert all(est.is_estimated(s, Q4) for s in SECTORS)
        assert "2019Q4" in est.notes[0]


class TestCompleteFiscalYear:
    def test_published_grand_total(self, base, fixtures):
        full = complete_fiscal_year(base, 2019, fixtures["shock_q4_fy2019"])
        assert annual_total(full, TOTAL, 2019) == pytest.approx(13109763, abs=0.5)

    def test_fills_only_q4(self, base, fixtures):
        full = complete_fiscal_year(base, 2019, fixtures["shock_q4_fy2019"])
        assert len(full) == len(base) + 8
        assert not full.is_estimated(SectorId.AGR, FiscalQuarter(2019, 1))

    def test_nothing_missing(self, pipeline, fixtures):
        with pytest.raises(NothingMissing):
            complete_fiscal_year(pipeline.actuals, 2019, fixtures["shock_q4_fy2019"])

    def test_multiple_missing(self, base, fixtures):
        m = GvaMatrix({k: v for k, v in base.items() if k[1].fy_start == 2018 or k[1].q in (1, 3)})
        with pytest.raises(MultipleMissing):
            complete_fiscal_year(m, 2019, fixtures["shock_q4_fy2019"])

    def test_partial_quarter_rejected(self, base):
        m = GvaMatrix({k: v for k, v in base.items() if k != (SectorId.PUB, FiscalQuarter(2019, 2))})
        with pytest.raises(PartialYear):
            missing_quarters(m, 2019)


@settings(max_examples=100, deadline=None)
@given(year_matrices(fys=(2018,)), st.floats(min_value=1e-3, max_value=1e3), shock_values)
def test_homogeneity(m, c, g):
    shocks = ShockSpec.uniform(g)
    plain, scaled = estimate_quarter(m, Q4, shocks), estimate_quarter(m.scaled(c), Q4, shocks)
    for key, v in plain.items():
        assert math.isclose(scaled[key], c * v, rel_tol=1e-12)


@settings(max_examples=100, deadline=None)
@given(year_matrices(fys=(2018,)), st.sampled_from(SECTORS), shock_values, st.floats(min_value=1e-3, max_value=0.5))
def test_monotone_in_shocks(m, sector, g, bump):
    lo = ShockSpec.uniform(g)
    hi = ShockSpec.uniform(g, **{sector.code: g + bump})
    a, b = estimate_quarter(m, Q4, lo), estimate_quarter(m, Q4, hi)
    assert b[(sector, Q4)] > a[(sector, Q4)]
    assert quarter_total(b, TOTAL, Q4) > quarter_total(a, TOTAL, Q4)
    for s in SECTORS:
        if s is not sector:
            assert b[(s, Q4)] == a[(s, Q4)]


@settings(max_examples=100, deadline=None)
@given(year_matrices(fys=(2017,)), shock_values, shock_values)
def test_composition(m, g, h):
    once = estimate_quarter(m, FiscalQuarter(2018, 4), ShockSpec.uniform(g))
    twice = estimate_quarter(once, Q4, ShockSpec.uniform(h))
    combined = estimate_quarter(m, FiscalQuarter(2018, 4), ShockSpec.uniform((1 + g) * (1 + h) - 1))
    for s in SECTORS:
        assert math.isclose(twice[(s, Q4)], combined[(s, FiscalQuarter(2018, 4))], rel_tol=1e-12)


def test_every_quarter_position(fixtures):
    prior = fixtures["actuals_2018_19"]
    for q in QUARTERS:
        est = estimate_quarter(prior, FiscalQuarter(2019, q), ShockSpec.uniform(0.1))
        assert est[(SectorId.FIN, FiscalQuarter(2019, q))] == pytest.approx(prior[(SectorId.FIN, FiscalQuarter(2018, q))] * 1.1)
