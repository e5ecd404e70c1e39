from __future__ import annotations

import logging
from dataclasses import dataclass
from datetime import date
from typing import Mapping, Sequence

import pandas as pd

from creditindex.errors import MissingDataError
from creditindex.rates import calibrate_equivalent_spread
from creditindex.series import IndexSeries, RateSeries, SeriesKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class LoanSpec:
    """
    A revolving credit line priced off `rate_series` (the full loan rate in percent,
    reference plus any fixed spread). Interest accrues daily on the ACT/360 basis.
    """

    name: str
    notional: float
    rate_series: IndexSeries
    day_count_base: int = 360
    amortizing: bool = False

    def __post_init__(self) -> None:
        if not self.notional > 0:
            raise ValueError(f"{self.name}: notional must be > 0, got {self.notional}")
        if self.day_count_base != 360:
            raise ValueError(f"{self.name}: only the 360 day-count base is supported")
        if self.amortizing:
            raise ValueError(f"{self.name}: amortizing loans are not supported")


@dataclass(frozen=True, eq=False)
class ProfitPath:
    """Running profit of one loan against a funding-cost series."""

    loan_name: str
    funding_name: str
    daily: pd.Series
    cumulative: pd.Series

    @property
    def days(self) -> int:
        return len(self.cumulative)

    @property
    def total(self) -> float:
        return float(self.cumulative.iloc[-1]) if len(self.cumulative) else 0.0


@dataclass(frozen=True)
class ProfitDifference:
    days: int
    dollars: float
    bp_per_period: float
    bp_annualized: float


def daily_accrual(rate: float, notional: float, day_count_base: int = 360) -> float:
    """Interest for one day on `notional` at `rate` percent per annum."""
    if not notional > 0:
        raise ValueError("notional must be > 0")
    return notional * rate / 100.0 / day_count_base


def _accrual_days(start: date, horizon: int) -> pd.DatetimeIndex:
    if horizon <= 0:
        raise ValueError("horizon must be a positive number of days")
    first = pd.Timestamp(start) + pd.Timedelta(days=1)
    return pd.date_range(first, periods=horizon, freq="D")


def rates_on_days(
    series: IndexSeries, days: pd.DatetimeIndex, max_gap_days: int = 4
) -> pd.Series:
    """
    Rate applying on each calendar day: the latest observation on or before it,
    carried forward for at most `max_gap_days - 1` days.
    """
    values = series.values
    if values.empty:
        raise MissingDataError(f"{series.name} has no observations", days[0].date())
    span = pd.date_range(min(values.index[0], days[0]), days[-1], freq="D")
    filled = values.reindex(span).ffill(limit=max(max_gap_days - 1, 0)).reindex(days)
    missing = filled.index[filled.isna()]
    if len(missing):
        raise MissingDataError(
            f"{series.name} does not cover the accrual period", missing[0].date()
        )
    return filled


def cumulative_profit(
    loan: LoanSpec,
    funding: IndexSeries,
    start: date,
    horizon: int,
    *,
    max_gap_days: int = 4,
) -> ProfitPath:
    """
    Running sum over days start+1 .. start+horizon of
    (loan rate - funding rate) / 360 * notional.
    """
    days = _accrual_days(start, horizon)
    loan_rate = rates_on_days(loan.rate_series, days, max_gap_days)
    funding_rate = rates_on_days(funding, days, max_gap_days)
    daily = (loan_rate - funding_rate) / 100.0 / loan.day_count_base * loan.notional
    daily.name = loan.name
    return ProfitPath(
        loan_name=loan.name,
        funding_name=funding.name,
        daily=daily,
        cumulative=daily.cumsum(),
    )


def profit_difference(
    a: LoanSpec,
    b: LoanSpec,
    funding: IndexSeries,
    start: date,
    horizon: int,
    *,
    max_gap_days: int = 4,
) -> ProfitDifference:
    """Extra profit of `a` over `b` after `horizon` days, in dollars and bp."""
    if a.notional != b.notional:
        raise ValueError("profit_difference compares loans of equal notional")
    path_a = cumulative_profit(a, funding, start, horizon, max_gap_days=max_gap_days)
    path_b = cumulative_profit(b, funding, start, horizon, max_gap_days=max_gap_days)
    dollars = float((path_a.daily - path_b.daily).sum())
    per_period = dollars / a.notional * 1e4
    return ProfitDifference(
        days=horizon,
        dollars=dollars,
        bp_per_period=per_period,
        bp_annualized=per_period / (horizon / a.day_count_base),
    )


def horizon_days(start: date, months: int) -> int:
    """Calendar days in `months` calendar months from `start`."""
    end = pd.Timestamp(start) + pd.DateOffset(months=months)
    return int((end - pd.Timestamp(start)).days)


REPORT_COLUMNS = [
    "period",
    "comparison",
    "horizon",
    "days",
    "profit_usd",
    "bp_annualized",
    "bp_per_period",
]


def stress_report(
    schemes: Sequence[LoanSpec],
    funding: IndexSeries,
    stress_start: date | Mapping[str, date],
    horizons: Sequence[int] = (1, 3, 12),
    *,
    max_gap_days: int = 4,
) -> pd.DataFrame:
    """
    Extra profit of the first scheme over each of the others, per stress period
    and horizon (calendar months from the anchor).

    Returns one row per (period, comparison, horizon). Passing the same scheme
    twice yields 0 bp everywhere.
    """
    if len(schemes) < 2:
        raise ValueError(
            "stress_report needs a reference scheme and at least one other"
        )
    anchors = (
        dict(stress_start)
        if isinstance(stress_start, Mapping)
        else {stress_start.isoformat(): stress_start}
    )
    reference, others = schemes[0], schemes[1:]
    rows = []
    for period, anchor in anchors.items():
        for other in others:
            for months in horizons:
                days = horizon_days(anchor, months)
                diff = profit_difference(
                    reference, other, funding, anchor, days, max_gap_days=max_gap_days
                )
                rows.append(
                    {
                        "period": period,
                        "comparison": f"{reference.name} vs. {other.name}",
                        "horizon": f"{months}m",
                        "days": days,
                        "profit_usd": diff.dollars,
                        "bp_annualized": diff.bp_annualized,
                        "bp_per_period": diff.bp_per_period,
                    }
                )
        logger.debug("stress period %s from %s evaluated", period, anchor.isoformat())
    return pd.DataFrame(rows, columns=REPORT_COLUMNS)


def stress_table(report: pd.DataFrame, value: str = "bp_annualized") -> pd.DataFrame:
    """Pivot a stress report to rows = period/comparison and columns = horizons."""
    if report.empty:
        return pd.DataFrame(columns=["period", "comparison"])
    horizon_order = list(dict.fromkeys(report["horizon"]))
    wide = report.pivot_table(
        index=["period", "comparison"], columns="horizon", values=value, sort=False
    )
    return wide[horizon_order].reset_index().rename_axis(columns=None)


def fixed_spread_loan(
    name: str, reference: IndexSeries, spread_pct: float, notional: float
) -> LoanSpec:
    """Loan priced at `reference + spread_pct`."""
    rate = RateSeries(
        name=name,
        values=reference.values + spread_pct,
        calendar_id=reference.calendar_id,
        kind=SeriesKind.COMPOSITE,
    )
    return LoanSpec(name=name, notional=notional, rate_series=rate)


def income_equivalent_loan(
    name: str,
    base: IndexSeries,
    target: IndexSeries,
    notional: float,
    target_spread_pct: float = 0.0,
) -> LoanSpec:
    """
    Loan on `base` whose fixed spread gives the same average rate as
    `target + target_spread_pct` over the shared dates.
    """
    spread = calibrate_equivalent_spread(target, base) + target_spread_pct
    logger.info(
        "%s: income-equivalent spread over %s is %.4f%%", name, base.name, spread
    )
    return fixed_spread_loan(name, base, spread, notional)

