from __future__ import annotations

from dataclasses import dataclass, field
from datetime import date, datetime
from typing import Any, Iterable

import pandas as pd


def _as_date(value: Any) -> date:
    if isinstance(value, datetime):
        return value.date()
    if isinstance(value, date):
        return value
    if isinstance(value, str):
        return date.fromisoformat(value.strip())
    raise TypeError(f"Cannot interpret {value!r} as a calendar date.")


@dataclass(frozen=True)
class BusinessCalendar:
    """
    Weekdays minus a holiday list supplied at run time.

    `calendar_id` is carried on every published series so consumers can tell
    which calendar a window was counted on.
    """

    holidays: frozenset[date] = field(default_factory=frozenset)
    calendar_id: str = "weekdays"

    @classmethod
    def from_holidays(
        cls, holidays: Iterable[Any] = (), calendar_id: str | None = None
    ) -> "BusinessCalendar":
        days = frozenset(_as_date(h) for h in holidays)
        cid = calendar_id or ("weekdays" if not days else f"weekdays-{len(days)}h")
        return cls(holidays=days, calendar_id=cid)

    @property
    def offset(self) -> pd.offsets.CustomBusinessDay:
        return pd.offsets.CustomBusinessDay(holidays=sorted(self.holidays))

    def is_business_day(self, day: Any) -> bool:
        d = _as_date(day)
        return d.weekday() < 5 and d not in self.holidays

    def business_days(self, start: Any, end: Any) -> pd.DatetimeIndex:
        """All business days in [start, end]."""
        return pd.bdate_range(
            _as_date(start), _as_date(end), freq="C", holidays=sorted(self.holidays)
        )

    def shift(self, day: Any, n: int) -> pd.Timestamp:
        """Move `n` business days from `day` (n may be negative)."""
        return pd.Timestamp(_as_date(day)) + n * self.offset

    def non_business(self, dates: Iterable[Any]) -> list[date]:
        return [d for d in (_as_date(x) for x in dates) if not self.is_business_day(d)]


WEEKDAYS = BusinessCalendar()
