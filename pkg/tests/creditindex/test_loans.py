from __future__ import annotations

from datetime import date

import numpy as np
import pandas as pd
import pytest

from creditindex.errors import MissingDataError
from creditindex.loans import (
    LoanSpec,
    cumulative_profit,
    daily_accrual,
    fixed_spread_loan,
    horizon_days,
    income_equivalent_loan,
    profit_difference,
    stress_report,
    stress_table,
)
from creditindex.series import RateSeries, SeriesKind

NOTIONAL = 1_000_000.0
START = date(2020, 3, 1)


def _funding(
    seed: int = 0, start: str = "2020-01-01", end: str = "2021-06-30"
) -> RateSeries:
    idx = pd.bdate_range(start, end)
    rng = np.random.default_rng(seed)
    values = 1.5 + np.cumsum(rng.normal(0, 0.02, len(idx)))
    return RateSeries(name="SOFR+AXI", values=pd.Series(values, index=idx))


def test_daily_accrual_examples() -> None:
    assert daily_accrual(3.6, NOTIONAL) == pytest.approx(100.0)
    assert daily_accrual(0.0, 5e6) == 0.0
    assert sum(daily_accrual(1.0, NOTIONAL) for _ in range(90)) == pytest.approx(2500.0)
    with pytest.raises(ValueError):
        daily_accrual(1.0, 0.0)


def test_loan_spec_validation() -> None:
    funding = _funding()
    with pytest.raises(ValueError):
        LoanSpec("bad", -1.0, funding)
    with pytest.raises(ValueError):
        LoanSpec("bad", NOTIONAL, funding, day_count_base=365)


def test_funding_plus_one_percent_earns_fixed_daily_profit() -> None:
    funding = _funding(seed=3)
    loan = fixed_spread_loan("credit-sensitive", funding, 1.0, NOTIONAL)
    path = cumulative_profit(loan, funding, START, 90)
    assert path.days == 90
    assert path.daily.iloc[0] == pytest.approx(10_000 / 360)
    assert path.cumulative.iloc[0] == path.daily.iloc[0]
    assert path.total == pytest.approx(2500.0, abs=1e-6)
    assert round(path.total, 2) == 2500.00


def test_loan_equal_to_funding_is_flat_zero() -> None:
    funding = _funding()
    loan = LoanSpec("same", NOTIONAL, funding)
    path = cumulative_profit(loan, funding, START, 30)
    assert (path.cumulative == 0.0).all()


def test_funding_spike_shortfall_against_reference_only_loan() -> None:
    idx = pd.date_range("2023-01-01", "2023-06-30", freq="D")
    sofr = RateSeries("SOFR", pd.Series(5.0, index=idx), kind=SeriesKind.OVERNIGHT)
    spike = pd.Series(0.0, index=idx)
    spike.loc["2023-03-02":"2023-05-30"] = 1.0  # 90 calendar days
    funding = RateSeries("SOFR+AXI", sofr.values + spike)
    credit = fixed_spread_loan("SOFR+AXI", funding, 1.0, NOTIONAL)
    sofr_only = fixed_spread_loan("SOFR", sofr, 1.0, NOTIONAL)
    diff = profit_difference(credit, sofr_only, funding, date(2023, 3, 1), 90)
    assert diff.dollars == pytest.approx(2500.0, abs=1e-6)
    assert diff.bp_per_period == pytest.approx(25.0)
    assert diff.bp_annualized == pytest.approx(100.0)


def test_profit_difference_is_antisymmetric() -> None:
    funding = _funding(seed=4)
    a = fixed_spread_loan("a", funding, 1.0, NOTIONAL)
    flat = funding.with_values(funding.values * 0 + 1.2)
    b = fixed_spread_loan("b", flat, 1.4, NOTIONAL)
    ab = profit_difference(a, b, funding, START, 92)
    ba = profit_difference(b, a, funding, START, 92)
    assert ab.dollars == pytest.approx(-ba.dollars)


def test_cumulative_profit_is_additive_over_horizons() -> None:
    funding = _funding(seed=5)
    flat = funding.with_values(funding.values * 0 + 2.0)
    loan = fixed_spread_loan("flat", flat, 0.0, NOTIONAL)
    whole = cumulative_profit(loan, funding, START, 100).total
    first = cumulative_profit(loan, funding, START, 40).total
    second = cumulative_profit(loan, funding, date(2020, 4, 10), 60).total
    assert whole == pytest.approx(first + second)


def test_cumulative_profit_reports_first_uncovered_day() -> None:
    funding = _funding(end="2020-03-31")
    loan = fixed_spread_loan("x", funding, 1.0, NOTIONAL)
    with pytest.raises(MissingDataError) as err:
        cumulative_profit(loan, funding, START, 90)
    assert err.value.first_missing == date(2020, 4, 4)


def test_horizon_days_uses_calendar_months() -> None:
    assert horizon_days(date(2020, 3, 1), 1) == 31
    assert horizon_days(date(2020, 3, 1), 3) == 92
    assert horizon_days(date(2020, 3, 1), 12) == 365


def test_identical_schemes_give_zero_everywhere() -> None:
    funding = _funding()
    loan = fixed_spread_loan("SOFR+AXI", funding, 1.0, NOTIONAL)
    report = stress_report([loan, loan], funding, {"Pandemic onset": START})
    assert len(report) == 3
    assert (report["profit_usd"] == 0.0).all()
    assert (report["bp_annualized"] == 0.0).all()
    table = stress_table(report)
    assert list(table.columns) == ["period", "comparison", "1m", "3m", "12m"]


def test_stress_report_compares_reference_with_each_scheme() -> None:
    funding = _funding(seed=9)
    sofr = funding.with_values(funding.values - 0.5)
    credit = fixed_spread_loan("SOFR+AXI", funding, 1.0, NOTIONAL)
    sofr_loan = income_equivalent_loan("SOFR", sofr, funding, NOTIONAL, 1.0)
    report = stress_report([credit, sofr_loan], funding, START, horizons=(1, 3))
    assert report["comparison"].unique().tolist() == ["SOFR+AXI vs. SOFR"]
    assert report["horizon"].tolist() == ["1m", "3m"]
    assert report["days"].tolist() == [31, 92]
    assert np.allclose(
        report["bp_annualized"], report["bp_per_period"] / (report["days"] / 360)
    )


def test_stress_report_needs_two_schemes() -> None:
    funding = _funding()
    with pytest.raises(ValueError):
        stress_report([LoanSpec("one", NOTIONAL, funding)], funding, START)
