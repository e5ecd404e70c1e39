from __future__ import annotations

from dataclasses import dataclass, field, replace
from datetime import date
from enum import Enum
from typing import Iterable, Optional

import numpy as np
import pandas as pd


class SeriesKind(str, Enum):
    OVERNIGHT = "overnight"
    AVERAGE_30D_COMPOUND = "average_30d_compound"
    AVERAGE_21BD_SIMPLE = "average_21bd_simple"
    COMPOSITE = "composite"
    LIBOR = "libor"
    PROXY = "proxy"
    INDEX = "index"
    INDICATOR = "indicator"


def _as_datetime_index(values: pd.Series) -> pd.Series:
    out = values.copy()
    out.index = pd.DatetimeIndex(pd.to_datetime(out.index)).normalize()
    out.index.name = "date"
    return out.astype(float)


@dataclass(frozen=True, eq=False)
class IndexSeries:
    """
    A dated sequence of published values (percent per annum unless `unit` says
    otherwise) on a named business-day calendar.

    `volume` optionally carries the underlying daily dollar volume per date.
    """

    name: str
    values: pd.Series
    unit: str = "percent p.a."
    calendar_id: str = "weekdays"
    kind: SeriesKind = SeriesKind.INDEX
    volume: Optional[pd.Series] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        vals = _as_datetime_index(self.values)
        if not vals.index.is_monotonic_increasing or vals.index.has_duplicates:
            raise ValueError(f"{self.name}: dates must be strictly increasing.")
        if not np.isfinite(vals.to_numpy()).all():
            raise ValueError(f"{self.name}: values must be finite.")
        vals.name = self.name
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "kind", SeriesKind(self.kind))
        if self.volume is not None:
            object.__setattr__(self, "volume", _as_datetime_index(self.volume))

    @classmethod
    def from_pairs(
        cls,
        name: str,
        pairs: Iterable[tuple[date, float]],
        **kwargs,
    ) -> "IndexSeries":
        items = list(pairs)
        idx = pd.DatetimeIndex([pd.Timestamp(d) for d, _ in items])
        values = pd.Series([v for _, v in items], index=idx)
        return cls(name=name, values=values, **kwargs)

    def __len__(self) -> int:
        return len(self.values)

    @property
    def dates(self) -> list[date]:
        return [ts.date() for ts in self.values.index]

    def pairs(self) -> list[tuple[date, float]]:
        return [(ts.date(), float(v)) for ts, v in self.values.items()]

    def get(self, day: date) -> Optional[float]:
        ts = pd.Timestamp(day)
        if ts in self.values.index:
            return float(self.values.loc[ts])
        return None

    def with_values(self, values: pd.Series, **changes) -> "IndexSeries":
        return replace(self, values=values, **changes)


@dataclass(frozen=True, eq=False)
class RateSeries(IndexSeries):
    """IndexSeries tagged with the kind of rate it holds."""

    kind: SeriesKind = SeriesKind.COMPOSITE


def inner_join(*series: IndexSeries) -> pd.DataFrame:
    """Align series on their common dates; columns are labelled by position."""
    frame = pd.concat(
        [s.values.rename(str(i)) for i, s in enumerate(series)], axis=1, join="inner"
    )
    return frame.dropna()
