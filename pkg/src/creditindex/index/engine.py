from __future__ import annotations

import logging
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import date
from enum import Enum
from typing import Iterable, Optional, Sequence

import numpy as np
import pandas as pd

from creditindex.calendar import WEEKDAYS, BusinessCalendar
from creditindex.config import Config
from creditindex.errors import BenchmarkUnavailableError, CreditIndexError, NoDataError
from creditindex.index.aggregation import DailySpreadDecomposition, daily_spread
from creditindex.series import IndexSeries, SeriesKind
from creditindex.transactions import IndexScope, Transaction

logger = logging.getLogger(__name__)


class SourceFlag(str, Enum):
    PRIMARY = "primary"
    FALLBACK = "fallback"


@dataclass(frozen=True, eq=False)
class IndexBuild:
    """Everything produced while computing one index from a transaction pool."""

    scope: IndexScope
    decompositions: list[DailySpreadDecomposition]
    daily: IndexSeries
    index: IndexSeries
    lt_fraction: IndexSeries

    @property
    def volume(self) -> pd.Series:
        return pd.Series(
            [d.total_volume for d in self.decompositions],
            index=pd.DatetimeIndex([pd.Timestamp(d.date) for d in self.decompositions]),
            name="volume_usd",
            dtype=float,
        )


# ----------------------------
# Rolling windows
# ----------------------------
def _check_calendar(
    dates: Iterable[date], calendar: Optional[BusinessCalendar]
) -> None:
    if calendar is None:
        return
    bad = calendar.non_business(dates)
    if bad:
        sample = ", ".join(d.isoformat() for d in bad[:3])
        raise CreditIndexError(
            f"{len(bad)} date(s) are not business days on calendar "
            f"'{calendar.calendar_id}', e.g. {sample}"
        )


def _empty() -> pd.Series:
    return pd.Series([], index=pd.DatetimeIndex([]), dtype=float)


def _trailing_means(values: np.ndarray, window: int) -> np.ndarray:
    windows = np.lib.stride_tricks.sliding_window_view(values, window)
    return windows.mean(axis=1)


def rolling_index(
    daily_spreads: IndexSeries | pd.Series,
    window: int = 21,
    *,
    name: str = "AXI",
    calendar: Optional[BusinessCalendar] = None,
    publish_lag: int = 0,
) -> IndexSeries:
    """
    Arithmetic mean of the trailing `window` daily observations.

    The value dated t averages the observations on t and the window - 1 before it
    (publish_lag=0), or is dated one business day later (publish_lag=1). Nothing is
    emitted until a full window exists.
    """
    if isinstance(daily_spreads, IndexSeries):
        series = daily_spreads.values.sort_index()
    else:
        series = daily_spreads.sort_index()
    if window <= 0:
        raise ValueError("window must be > 0")
    cal = calendar or WEEKDAYS
    dates = [ts.date() for ts in series.index]
    _check_calendar(dates, calendar)

    if len(series) < window:
        logger.debug(
            "%s: %d observations, fewer than window %d", name, len(series), window
        )
        out = _empty()
    else:
        means = _trailing_means(series.to_numpy(dtype=float), window)
        idx = pd.DatetimeIndex(series.index[window - 1 :])
        if publish_lag:
            idx = pd.DatetimeIndex([cal.shift(ts, publish_lag) for ts in idx])
        out = pd.Series(means, index=idx)
    return IndexSeries(
        name=name,
        values=out,
        calendar_id=cal.calendar_id,
        kind=SeriesKind.INDEX,
    )


def lt_weight_fraction(
    decompositions: Sequence[DailySpreadDecomposition], window: int = 21
) -> IndexSeries:
    """
    Trailing mean of the daily LT share of maturity-weighted volume,
    LT m*v / (ST m*v + LT m*v), which equals the day's summed LT weights.
    """
    if not decompositions:
        raise NoDataError("lt_weight_fraction needs at least one decomposition")
    ordered = sorted(decompositions, key=lambda d: d.date)
    daily = pd.Series(
        [d.lt_weight for d in ordered],
        index=pd.DatetimeIndex([pd.Timestamp(d.date) for d in ordered]),
    )
    out = rolling_index(daily, window, name="LT weight")
    return out.with_values(out.values, unit="fraction")


# ----------------------------
# Daily decomposition and index computation
# ----------------------------
def _group_by_date(
    transactions: Iterable[Transaction],
) -> dict[date, list[Transaction]]:
    grouped: dict[date, list[Transaction]] = defaultdict(list)
    for t in transactions:
        grouped[t.trade_date].append(t)
    return dict(sorted(grouped.items()))


def decompose_days(
    transactions: Iterable[Transaction],
    scope: IndexScope = IndexScope.FXI,
    workers: int = 1,
) -> list[DailySpreadDecomposition]:
    """
    Daily decompositions in date order for trades admitted by `scope`.

    Trades outside the (0, 5] year range never enter the pool. A date whose
    admitted trades all carry zero volume has no spread: it is logged and left
    out, so it never enters the rolling window. Evaluation with `workers > 1` is
    spread over a thread pool and gives the same result as the sequential path.
    """
    scope = IndexScope(scope)
    admitted: list[Transaction] = []
    ineligible = 0
    for t in transactions:
        if not scope.admits(t.scope_tag):
            continue
        if not t.eligible:
            ineligible += 1
            continue
        admitted.append(t)
    if ineligible:
        logger.warning(
            "%s: skipped %d ineligible transaction(s)", scope.value, ineligible
        )

    groups = list(_group_by_date(admitted).items())

    def _one(
        item: tuple[date, list[Transaction]],
    ) -> Optional[DailySpreadDecomposition]:
        day, rows = item
        try:
            return daily_spread(rows, on_date=day)
        except NoDataError as exc:
            logger.warning("%s: skipped %s (%s)", scope.value, day, exc)
            return None

    if workers > 1 and len(groups) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one, groups))
    else:
        results = [_one(g) for g in groups]
    return [d for d in results if d is not None]


def build_index(
    transactions: Iterable[Transaction],
    scope: IndexScope | str = IndexScope.AXI,
    config: Optional[Config] = None,
) -> IndexBuild:
    """
    Run the full pipeline: decompose each date, then roll the daily spreads.

    Dates with zero admitted volume are skipped by `decompose_days` rather than
    aborting the build.
    """
    cfg_obj = config or Config()
    scope = IndexScope(scope)
    calendar = cfg_obj.calendar
    decompositions = decompose_days(
        transactions, scope=scope, workers=cfg_obj.NUM_PARALLEL_WORKERS
    )
    label = scope.value.upper()
    daily_values = pd.Series(
        [d.daily_spread for d in decompositions],
        index=pd.DatetimeIndex([pd.Timestamp(d.date) for d in decompositions]),
        dtype=float,
    )
    daily = IndexSeries(
        name=f"{label} daily spread",
        values=daily_values,
        calendar_id=calendar.calendar_id,
        kind=SeriesKind.INDEX,
    )
    index = rolling_index(
        daily,
        cfg_obj.WINDOW_BUSINESS_DAYS,
        name=label,
        calendar=calendar,
        publish_lag=cfg_obj.PUBLISH_LAG,
    )
    volume = pd.Series(
        [d.total_volume for d in decompositions], index=daily_values.index, dtype=float
    )
    if cfg_obj.PUBLISH_LAG:
        volume.index = pd.DatetimeIndex(
            [calendar.shift(ts, cfg_obj.PUBLISH_LAG) for ts in volume.index]
        )
    if decompositions:
        lt_fraction = lt_weight_fraction(decompositions, cfg_obj.WINDOW_BUSINESS_DAYS)
    else:
        lt_fraction = IndexSeries(name="LT weight", values=_empty(), unit="fraction")
    return IndexBuild(
        scope=scope,
        decompositions=decompositions,
        daily=daily,
        index=index.with_values(index.values, volume=volume),
        lt_fraction=lt_fraction,
    )



def compute_index(
    transactions: Iterable[Transaction],
    scope: IndexScope | str = IndexScope.AXI,
    config: Optional[Config] = None,
) -> IndexSeries:
    """AXI keeps bank trades only; FXI uses every trade. Same pipeline for both."""
    return build_index(transactions, scope, config).index


# ----------------------------
# Fallback to FXI
# ----------------------------
def default_fallback_threshold(
    volume: pd.Series, day: date, fraction: float = 0.5, window: int = 21
) -> float:
    """
    `fraction` times the median daily volume over the `window` observations
    before `day`.
    """
    history = volume.sort_index()
    history = history[history.index < pd.Timestamp(day)].tail(window)
    if history.empty:
        return 0.0
    return float(fraction * history.median())


def fallback_value(
    day: date,
    axi: IndexSeries,
    fxi: IndexSeries,
    min_volume: float,
) -> tuple[float, SourceFlag]:
    """
    AXI when it is published on `day` with underlying volume >= min_volume,
    otherwise FXI flagged as a fallback.
    """
    primary = axi.get(day)
    volume: Optional[float] = None
    if axi.volume is not None and pd.Timestamp(day) in axi.volume.index:
        volume = float(axi.volume.loc[pd.Timestamp(day)])

    if primary is not None and (volume is None or volume >= min_volume):
        return primary, SourceFlag.PRIMARY

    secondary = fxi.get(day)
    if secondary is not None:
        return secondary, SourceFlag.FALLBACK
    if primary is not None:
        logger.warning(
            "%s: %s volume %.0f below threshold %.0f but %s is unavailable",
            day.isoformat(),
            axi.name,
            volume or 0.0,
            min_volume,
            fxi.name,
        )
        return primary, SourceFlag.PRIMARY
    raise BenchmarkUnavailableError(
        f"Neither {axi.name} nor {fxi.name} is published on {day.isoformat()}."
    )


def publish_with_fallback(
    axi: IndexSeries,
    fxi: IndexSeries,
    fraction: float = 0.5,
    window: int = 21,
) -> pd.DataFrame:
    """Apply `fallback_value` on every date where either series publishes."""
    dates = sorted(set(axi.dates) | set(fxi.dates))
    volume = axi.volume if axi.volume is not None else pd.Series([], dtype=float)
    rows = []
    for day in dates:
        threshold = default_fallback_threshold(volume, day, fraction, window)
        value, flag = fallback_value(day, axi, fxi, threshold)
        rows.append(
            {
                "date": day.isoformat(),
                "value_pct": value,
                "source": flag.value,
                "threshold_usd": threshold,
            }
        )
    return pd.DataFrame(rows, columns=["date", "value_pct", "source", "threshold_usd"])


# ----------------------------
# Helpers around the index
# ----------------------------
def match_risk_free(
    trade_rate: float, maturity: float, curve: Sequence[tuple[float, float]]
) -> float:
    """Trade rate minus the risk-free curve linearly interpolated at `maturity`."""
    if not curve:
        raise NoDataError("risk-free curve is empty")
    points = sorted(curve)
    tenors = np.array([p[0] for p in points], dtype=float)
    rates = np.array([p[1] for p in points], dtype=float)
    return float(trade_rate - np.interp(maturity, tenors, rates))


def normalize_to(series: pd.Series, reference: pd.Series) -> pd.Series:
    """Rescale `series` so it starts at the first value of `reference`."""
    if series.empty or reference.empty:
        raise NoDataError("cannot normalise an empty series")
    first = float(series.iloc[0])
    if first == 0:
        raise NoDataError("series starts at zero and cannot be rescaled")
    return series * (float(reference.iloc[0]) / first)


def spread_summary(
    decompositions: Sequence[DailySpreadDecomposition], index: IndexSeries
) -> pd.DataFrame:
    """Mean, standard deviation and coefficient of variation per spread component."""
    if not decompositions:
        raise NoDataError("spread_summary needs decompositions")
    columns = {
        index.name: index.values,
        "daily spread": pd.Series([d.daily_spread for d in decompositions]),
        "LT spread": pd.Series([d.lt_spread for d in decompositions], dtype=float),
        "ST spread": pd.Series([d.st_spread for d in decompositions], dtype=float),
    }
    rows: dict[str, dict[str, float]] = {
        "mean": {},
        "st. deviation": {},
        "coef. of variation": {},
    }
    for label, values in columns.items():
        clean = values.dropna()
        mean = float(clean.mean()) if len(clean) else float("nan")
        std = float(clean.std(ddof=1)) if len(clean) > 1 else float("nan")
        rows["mean"][label] = mean
        rows["st. deviation"][label] = std
        rows["coef. of variation"][label] = std / mean if mean else float("nan")
    rows["mean"]["LT weight"] = float(np.mean([d.lt_weight for d in decompositions]))
    frame = pd.DataFrame(rows).T
    frame.index.name = "statistic"
    return frame


def _correl(x: pd.Series, y: pd.Series) -> float:
    if len(x) < 2 or not (x.std() > 0 and y.std() > 0):
        return float("nan")
    return float(np.corrcoef(x.to_numpy(), y.to_numpy())[0, 1])


def volume_summary(decompositions: Sequence[DailySpreadDecomposition]) -> pd.DataFrame:
    """
    Daily dollar volume behind an index.

    Mean, minimum and maximum total volume (with the dates of the extremes), the
    mean LT weight, and the correlation between ST and LT volume, both
    maturity-weighted and raw. A correlation is NaN when either side is constant.
    """
    if not decompositions:
        raise NoDataError("volume_summary needs decompositions")
    dates = pd.DatetimeIndex([pd.Timestamp(d.date) for d in decompositions])
    total = pd.Series([d.total_volume for d in decompositions], index=dates)
    st = pd.Series([d.st_volume for d in decompositions], index=dates)
    lt = pd.Series([d.lt_volume for d in decompositions], index=dates)
    st_weighted = pd.Series(
        [d.st_volume * d.st_maturity for d in decompositions], index=dates
    )
    lt_weighted = pd.Series(
        [
            sum(v * d.lt_maturities.get(b, 0.0) for b, v in d.lt_volumes.items())
            for d in decompositions
        ],
        index=dates,
    )
    rows = [
        ("mean daily volume", float(total.mean()), ""),
        ("min daily volume", float(total.min()), total.idxmin().date().isoformat()),
        ("max daily volume", float(total.max()), total.idxmax().date().isoformat()),
        ("mean LT weight", float(np.mean([d.lt_weight for d in decompositions])), ""),
        (
            "correl. ST vs LT maturity-weighted volume",
            _correl(st_weighted, lt_weighted),
            "",
        ),
        ("correl. ST vs LT volume", _correl(st, lt), ""),
    ]
    return pd.DataFrame(rows, columns=["statistic", "value", "date"])
