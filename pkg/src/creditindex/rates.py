from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta
from typing import Optional

import numpy as np
import pandas as pd

from creditindex.calendar import BusinessCalendar
from creditindex.errors import AlignmentError, MissingDataError
from creditindex.index.engine import rolling_index
from creditindex.series import IndexSeries, RateSeries, SeriesKind, inner_join


@dataclass(frozen=True, eq=False)
class CompositeRateSpec:
    """reference + fixed_spread + sensitivity * AXI, with sensitivity in [0, 1]."""

    reference: RateSeries
    fixed_spread: float
    sensitivity: float

    def __post_init__(self) -> None:
        if not (0.0 <= self.sensitivity <= 1.0):
            raise ValueError(
                f"sensitivity must be within [0, 1], got {self.sensitivity}"
            )
        if not np.isfinite(self.fixed_spread):
            raise ValueError("fixed_spread must be finite")


def _check_coverage(
    dates: pd.DatetimeIndex,
    calendar: Optional[BusinessCalendar],
    max_gap_days: int,
) -> None:
    if len(dates) < 2:
        return
    if calendar is not None:
        expected = calendar.business_days(dates[0], dates[-1])
        missing = expected.difference(dates)
        if len(missing):
            raise MissingDataError(
                "overnight series has business days without a rate",
                missing[0].date(),
            )
        return
    gaps = np.diff(dates.values).astype("timedelta64[D]").astype(int)
    too_long = np.flatnonzero(gaps > max_gap_days)
    if too_long.size:
        first = dates[too_long[0]].date() + timedelta(days=1)
        raise MissingDataError(
            f"gap longer than {max_gap_days} days in overnight series", first
        )


def compounded_average(
    overnight_rates: RateSeries | IndexSeries,
    window: int = 30,
    *,
    calendar: Optional[BusinessCalendar] = None,
    max_gap_days: int = 4,
    day_count: int = 360,
) -> RateSeries:
    """
    Compounded average over `window` calendar days ending on each observation date.

    value = [prod(1 + r_i * n_i / 360) - 1] * 360 / window, where n_i is the
    number of window days on which rate i applies (a rate applies until the next
    observation, so a Friday rate covers the weekend). Dates whose window starts
    before the first observation are not emitted.
    """
    s = overnight_rates.values.sort_index()
    dates = pd.DatetimeIndex(s.index)
    _check_coverage(dates, calendar, max_gap_days)

    day_numbers = dates.values.astype("datetime64[D]").astype(np.int64)
    rates = s.to_numpy(dtype=float) / 100.0
    out_dates: list[pd.Timestamp] = []
    out_values: list[float] = []
    for k in range(len(dates)):
        end = day_numbers[k] + 1  # exclusive
        start = end - window
        j0 = int(np.searchsorted(day_numbers, start, side="right")) - 1
        if j0 < 0:
            continue
        seg_start = np.maximum(day_numbers[j0 : k + 1], start)
        seg_end = np.append(day_numbers[j0 + 1 : k + 1], end)
        n = seg_end - seg_start
        growth = np.prod(1.0 + rates[j0 : k + 1] * n / day_count)
        out_dates.append(dates[k])
        out_values.append((growth - 1.0) * day_count / window * 100.0)

    return RateSeries(
        name=f"{overnight_rates.name} {window}d compound",
        values=pd.Series(out_values, index=pd.DatetimeIndex(out_dates), dtype=float),
        calendar_id=overnight_rates.calendar_id,
        kind=SeriesKind.AVERAGE_30D_COMPOUND,
    )


def simple_rolling_average(
    series: IndexSeries,
    window: int = 21,
    *,
    calendar: Optional[BusinessCalendar] = None,
) -> RateSeries:
    """Trailing simple average over `window` business-day observations."""
    rolled = rolling_index(
        series, window, name=f"{series.name} {window}bd simple", calendar=calendar
    )
    return RateSeries(
        name=rolled.name,
        values=rolled.values,
        calendar_id=rolled.calendar_id,
        kind=SeriesKind.AVERAGE_21BD_SIMPLE,
    )


def averaging_method_gap(
    daily_spreads: IndexSeries,
    *,
    simple_window: int = 21,
    compound_window: int = 30,
    max_gap_days: int = 4,
) -> RateSeries:
    """Simple business-day average minus compounded calendar-day average, per date."""
    simple = simple_rolling_average(daily_spreads, simple_window)
    compound = compounded_average(
        daily_spreads, compound_window, max_gap_days=max_gap_days
    )
    joined = inner_join(simple, compound)
    return RateSeries(
        name=f"{daily_spreads.name} simple minus compound",
        values=joined["0"] - joined["1"],
        calendar_id=daily_spreads.calendar_id,
        kind=SeriesKind.COMPOSITE,
    )


def credit_sensitive_rate(spec: CompositeRateSpec, axi: IndexSeries) -> RateSeries:
    """R_t + s + c * AXI_t on the dates both series publish."""
    joined = inner_join(spec.reference, axi)
    if joined.empty:
        raise AlignmentError(f"{spec.reference.name} and {axi.name} share no dates")
    values = joined["0"] + spec.fixed_spread + spec.sensitivity * joined["1"]
    return RateSeries(
        name=(
            f"{spec.reference.name}+{spec.sensitivity:g}*{axi.name}"
            f"+{spec.fixed_spread:g}"
        ),
        values=values,
        calendar_id=spec.reference.calendar_id,
        kind=SeriesKind.COMPOSITE,
    )


def mean_spread(a: IndexSeries, b: IndexSeries) -> float:
    """Average of a - b over the shared dates."""
    joined = inner_join(a, b)
    if joined.empty:
        raise AlignmentError(f"{a.name} and {b.name} share no dates")
    return float((joined["0"] - joined["1"]).mean())


def calibrate_equivalent_spread(target: IndexSeries, base: IndexSeries) -> float:
    """
    Spread that makes `base + spread` earn the same average income as `target`:
    mean(target) - mean(base) over the shared dates.
    """
    joined = inner_join(target, base)
    if joined.empty:
        raise AlignmentError(f"{target.name} and {base.name} share no dates")
    return float(joined["0"].mean() - joined["1"].mean())


def libor_proxy(term_sofr: RateSeries, spread_bp: float = 11.48) -> RateSeries:
    """Term SOFR plus a fixed fallback spread quoted in basis points."""
    return RateSeries(
        name=f"{term_sofr.name}+{spread_bp:g}bp",
        values=term_sofr.values + spread_bp / 100.0,
        calendar_id=term_sofr.calendar_id,
        kind=SeriesKind.PROXY,
    )


def spliced_libor(
    libor: RateSeries,
    term_sofr: RateSeries,
    cutover: date = date(2023, 6, 30),
    spread_bp: float = 11.48,
) -> RateSeries:
    """Published LIBOR up to and including `cutover`, the term-SOFR proxy afterwards."""
    cut = pd.Timestamp(cutover)
    proxy = libor_proxy(term_sofr, spread_bp).values
    values = pd.concat(
        [libor.values[libor.values.index <= cut], proxy[proxy.index > cut]]
    )
    return RateSeries(
        name=libor.name,
        values=values.sort_index(),
        calendar_id=libor.calendar_id,
        kind=SeriesKind.LIBOR,
    )
