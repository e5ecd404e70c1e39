from __future__ import annotations

import io
from datetime import date, timedelta

import pytest

from creditindex.calendar import BusinessCalendar
from creditindex.generate.synthetic import SyntheticConfig, generate_synthetic
from creditindex.precheck import precheck_transactions
from creditindex.transactions import IndexScope, MaturityBucket, ScopeTag, Transaction


def _day_of_trades(day: date, volume: float = 1.0) -> list[Transaction]:
    return [
        Transaction(day, m, volume, 0.1 * (i + 1))
        for i, m in enumerate((0.5, 1.5, 2.5, 3.5, 4.5))
    ]


def _weekdays(start: date, n: int) -> list[date]:
    out, day = [], start
    while len(out) < n:
        if day.weekday() < 5:
            out.append(day)
        day += timedelta(days=1)
    return out


def test_clean_pool_passes(
    calm_synth: SyntheticConfig, capsys: pytest.CaptureFixture[str]
) -> None:
    pool = generate_synthetic(calm_synth)
    summary = precheck_transactions(pool, IndexScope.AXI)
    assert summary.ok
    assert summary.n_admitted == sum(t.scope_tag is ScopeTag.BANK for t in pool)
    assert summary.n_transactions == len(pool)
    out = capsys.readouterr().out
    assert "Pre-check" in out
    assert "✅ AXI" in out
    assert "❌" not in out


def test_fxi_admits_everything(calm_synth: SyntheticConfig) -> None:
    pool = generate_synthetic(calm_synth)
    summary = precheck_transactions(pool, "fxi", verbose=False)
    assert summary.n_admitted == len(pool)


def test_problems_are_flagged(capsys: pytest.CaptureFixture[str]) -> None:
    days = _weekdays(date(2023, 1, 2), 6)
    pool = [t for d in days if d != days[2] for t in _day_of_trades(d)]
    pool += _day_of_trades(date(2023, 1, 7))  # Saturday
    pool.append(Transaction(days[0], 6.0, 1.0, 0.1))
    pool += [Transaction(days[1], 0.5, 1.0, 0.1, ScopeTag.NONBANK)]

    summary = precheck_transactions(pool, IndexScope.AXI, window=21)
    assert summary.n_ineligible == 1
    assert summary.missing_business_days == [days[2]]
    assert summary.off_calendar_dates == [date(2023, 1, 7)]
    assert not summary.publishable
    assert not summary.ok

    out = capsys.readouterr().out
    assert "❌ 1 transaction(s) with maturity outside (0, 5]" in out
    assert "❌ 1 business day(s) without trades" in out
    assert "2023-01-07" in out
    assert "Fewer than 21 dates" in out


def test_zero_volume_dates_and_empty_buckets() -> None:
    days = _weekdays(date(2023, 1, 2), 3)
    pool = [Transaction(days[0], 0.5, 10.0, 0.1), Transaction(days[1], 0.5, 0.0, 0.1)]
    pool.append(Transaction(days[2], 1.5, 5.0, 0.2))
    summary = precheck_transactions(pool, verbose=False, window=2)
    assert summary.zero_volume_dates == [days[1]]
    assert summary.empty_buckets == [
        MaturityBucket.LT2,
        MaturityBucket.LT3,
        MaturityBucket.LT4,
    ]
    assert summary.publishable
    assert summary.volume_per_date[days[2]] == 5.0


def test_holidays_are_not_missing() -> None:
    days = _weekdays(date(2023, 1, 9), 10)
    holiday = date(2023, 1, 16)
    pool = [t for d in days if d != holiday for t in _day_of_trades(d)]
    stream = io.StringIO()
    summary = precheck_transactions(
        pool,
        calendar=BusinessCalendar.from_holidays([holiday]),
        window=5,
        stream=stream,
    )
    assert summary.missing_business_days == []
    assert summary.ok
    assert "Every business day in the span has trades" in stream.getvalue()


def test_empty_pool(capsys: pytest.CaptureFixture[str]) -> None:
    summary = precheck_transactions([])
    assert summary.n_dates == 0
    assert summary.first_date is None
    assert "none of 0 transactions admitted" in capsys.readouterr().out
