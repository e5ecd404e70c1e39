# creditindex/precheck.py
from __future__ import annotations

import sys
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Optional

import numpy as np

from creditindex.calendar import WEEKDAYS, BusinessCalendar
from creditindex.transactions import IndexScope, MaturityBucket, Transaction


@dataclass
class PrecheckSummary:
    scope: IndexScope
    n_transactions: int = 0
    n_admitted: int = 0
    n_ineligible: int = 0
    first_date: Optional[date] = None
    last_date: Optional[date] = None
    n_dates: int = 0
    trades_per_date: dict[date, int] = field(default_factory=dict)
    volume_per_date: dict[date, float] = field(default_factory=dict)
    zero_volume_dates: list[date] = field(default_factory=list)
    missing_business_days: list[date] = field(default_factory=list)
    off_calendar_dates: list[date] = field(default_factory=list)
    empty_buckets: list[MaturityBucket] = field(default_factory=list)
    window: int = 21

    @property
    def publishable(self) -> bool:
        """At least one full window of dates with volume."""
        return self.n_dates - len(self.zero_volume_dates) >= self.window

    @property
    def ok(self) -> bool:
        return (
            self.publishable
            and not self.zero_volume_dates
            and not self.missing_business_days
            and not self.off_calendar_dates
        )


def _sample(days: list[date], k: int) -> str:
    shown = ", ".join(d.isoformat() for d in days[:k])
    more = f", +{len(days) - k} more" if len(days) > k else ""
    return shown + more


def precheck_transactions(
    transactions: Iterable[Transaction],
    scope: IndexScope | str = IndexScope.AXI,
    calendar: Optional[BusinessCalendar] = None,
    *,
    window: int = 21,
    verbose: bool = True,
    examples: int = 3,
    stream=None,
) -> PrecheckSummary:
    """
    Data-quality pass over a transaction pool before index computation.

    Counts trades and volume per date for the trades `scope` admits, and flags
    ineligible maturities, dates without volume, business days with no trades,
    trade dates that are not business days, and buckets that never trade.
    """
    scope = IndexScope(scope)
    cal = calendar or WEEKDAYS
    summary = PrecheckSummary(scope=scope, window=window)

    counts: Counter[date] = Counter()
    volumes: defaultdict[date, float] = defaultdict(float)
    bucket_volume: Counter[MaturityBucket] = Counter()
    for t in transactions:
        summary.n_transactions += 1
        if not scope.admits(t.scope_tag):
            continue
        if not t.eligible:
            summary.n_ineligible += 1
            continue
        summary.n_admitted += 1
        counts[t.trade_date] += 1
        volumes[t.trade_date] += t.volume
        bucket_volume[t.bucket] += t.volume

    dates = sorted(counts)
    summary.n_dates = len(dates)
    summary.trades_per_date = {d: counts[d] for d in dates}
    summary.volume_per_date = {d: volumes[d] for d in dates}
    summary.zero_volume_dates = [d for d in dates if volumes[d] <= 0]
    summary.empty_buckets = [b for b in MaturityBucket if bucket_volume[b] <= 0]
    if dates:
        summary.first_date, summary.last_date = dates[0], dates[-1]
        expected = {ts.date() for ts in cal.business_days(dates[0], dates[-1])}
        summary.missing_business_days = sorted(expected - set(dates))
        summary.off_calendar_dates = cal.non_business(dates)

    if verbose:
        print_precheck(summary, examples=examples, stream=stream or sys.stdout)
    return summary


def print_precheck(
    summary: PrecheckSummary, *, examples: int = 3, stream=sys.stdout
) -> None:
    """One ✅/❌ line per check."""
    label = summary.scope.value.upper()
    print("\nPre-check:\n", file=stream)
    if summary.n_admitted:
        span = f"{summary.first_date} .. {summary.last_date}"
        print(
            f"✅ {label}: {summary.n_admitted:,} of {summary.n_transactions:,} "
            f"transactions admitted over {summary.n_dates} date(s) ({span})",
            file=stream,
        )
    else:
        print(
            f"❌ {label}: none of {summary.n_transactions:,} transactions admitted",
            file=stream,
        )

    if summary.n_ineligible:
        print(
            f"❌ {summary.n_ineligible:,} transaction(s) with maturity outside "
            "(0, 5] years will be skipped",
            file=stream,
        )
    else:
        print("✅ All admitted maturities within (0, 5] years", file=stream)

    if summary.volume_per_date:
        vols = np.array(list(summary.volume_per_date.values()), dtype=float)
        print(
            f"ℹ️  Daily volume: median={np.median(vols):,.0f} | "
            f"min={vols.min():,.0f} | max={vols.max():,.0f} USD",
            file=stream,
        )
    if summary.zero_volume_dates:
        print(
            f"❌ {len(summary.zero_volume_dates)} date(s) with zero volume — e.g. "
            f"{_sample(summary.zero_volume_dates, examples)}",
            file=stream,
        )

    if summary.missing_business_days:
        print(
            f"❌ {len(summary.missing_business_days)} business day(s) "
            "without trades — e.g. "
            f"{_sample(summary.missing_business_days, examples)}",
            file=stream,
        )
    elif summary.n_dates:
        print("✅ Every business day in the span has trades", file=stream)

    if summary.off_calendar_dates:
        print(
            f"❌ {len(summary.off_calendar_dates)} trade date(s) "
            "are not business days — e.g. "
            f"{_sample(summary.off_calendar_dates, examples)}",
            file=stream,
        )

    if summary.empty_buckets:
        names = ", ".join(b.value for b in summary.empty_buckets)
        print(f"❌ Buckets with no volume: {names}", file=stream)
    else:
        print("✅ Every maturity bucket has volume", file=stream)

    if summary.publishable:
        print(
            f"✅ At least {summary.window} dates with volume: index can publish",
            file=stream,
        )
    else:
        print(
            f"❌ Fewer than {summary.window} dates with volume: "
            "no index value can publish",
            file=stream,
        )
