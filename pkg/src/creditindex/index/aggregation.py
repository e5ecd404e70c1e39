from __future__ import annotations

import math
from dataclasses import dataclass, field
from datetime import date
from typing import Iterable, Optional, Sequence

import numpy as np

from creditindex.errors import NoDataError
from creditindex.transactions import (
    LT_BUCKETS,
    MaturityBucket,
    Transaction,
    assign_bucket,
)

# Cumulative shares within this distance of one half count as an exact tie.
HALF_MASS_RTOL = 1e-9


def weighted_median(values: Iterable[tuple[float, float]]) -> float:
    """
    Dollar-volume-weighted median of (spread, weight) pairs.

    Returns the smallest spread whose cumulative weight reaches half the total.
    When the cumulative weight equals exactly half at that spread, returns the
    midpoint between it and the next distinct spread. The tie is decided on the
    cumulative share of total weight, so rescaling every weight gives the same
    median. Zero-weight items carry no mass and are ignored.
    """
    items = list(values)
    if not items:
        raise NoDataError("weighted_median needs at least one observation")
    arr = np.asarray(items, dtype=float).reshape(-1, 2)
    spreads, weights = arr[:, 0], arr[:, 1]
    if (weights < 0).any():
        raise ValueError("weights must be non-negative")

    keep = weights > 0
    spreads, weights = spreads[keep], weights[keep]
    if spreads.size == 0:
        raise NoDataError("weighted_median has zero total weight")

    order = np.argsort(spreads, kind="stable")
    distinct, starts = np.unique(spreads[order], return_index=True)
    mass = np.add.reduceat(weights[order], starts)
    share = np.cumsum(mass) / math.fsum(mass)

    i = int(np.searchsorted(share, 0.5 - HALF_MASS_RTOL, side="left"))
    i = min(i, distinct.size - 1)
    if abs(share[i] - 0.5) <= HALF_MASS_RTOL and i + 1 < distinct.size:
        return float((distinct[i] + distinct[i + 1]) / 2.0)
    return float(distinct[i])


def bucket_weights(
    st_volume: float,
    st_avg_maturity: float,
    lt: Sequence[tuple[float, float]],
) -> tuple[float, list[float]]:
    """
    Maturity-weighted dollar volume shares.

    Each weight is (maturity * volume) / sum over all segments of (maturity * volume).
    `lt` holds (volume, average maturity) per long-term bucket.
    """
    volumes = [st_volume] + [v for v, _ in lt]
    if any(v < 0 for v in volumes):
        raise ValueError("volumes must be non-negative")
    products = np.array(
        [st_volume * st_avg_maturity] + [v * m for v, m in lt], dtype=float
    )
    total = products.sum()
    if not total > 0:
        raise NoDataError("all maturity-weighted volumes are zero")
    shares = products / total
    return float(shares[0]), [float(w) for w in shares[1:]]


def weighted_avg_maturity(transactions: Iterable[Transaction]) -> float:
    """Volume-weighted average maturity (years) of the given trades."""
    rows = [(t.maturity, t.volume) for t in transactions]
    if not rows:
        raise NoDataError("no transactions to average")
    arr = np.asarray(rows, dtype=float)
    total = arr[:, 1].sum()
    if not total > 0:
        raise NoDataError("zero total volume")
    return float(np.dot(arr[:, 0], arr[:, 1]) / total)


@dataclass(frozen=True)
class DailySpreadDecomposition:
    """
    One day's composite spread and the bucket-level inputs behind it.

    Buckets without volume have no spread entry and zero weight.
    """

    date: date
    st_spread: Optional[float]
    lt_bucket_spreads: dict[MaturityBucket, float]
    st_weight: float
    lt_weights: dict[MaturityBucket, float]
    daily_spread: float
    st_volume: float
    lt_volumes: dict[MaturityBucket, float]
    weighted_avg_maturity: float
    trade_count: int = 0
    st_maturity: float = 0.0
    lt_maturities: dict[MaturityBucket, float] = field(default_factory=dict)

    @property
    def lt_weight(self) -> float:
        return float(sum(self.lt_weights.values()))

    @property
    def lt_volume(self) -> float:
        return float(sum(self.lt_volumes.values()))

    @property
    def total_volume(self) -> float:
        return self.st_volume + self.lt_volume

    @property
    def lt_spread(self) -> Optional[float]:
        """Maturity-weighted mean of the LT bucket medians; None without LT volume."""
        lt_w = self.lt_weight
        if lt_w <= 0:
            return None
        weighted = sum(
            self.lt_weights[b] * s for b, s in self.lt_bucket_spreads.items()
        )
        return weighted / lt_w

    def bucket_spreads(self) -> list[float]:
        out = list(self.lt_bucket_spreads.values())
        if self.st_spread is not None:
            out.append(self.st_spread)
        return out


def daily_spread(
    transactions: Iterable[Transaction], on_date: Optional[date] = None
) -> DailySpreadDecomposition:
    """
    Composite spread for one trade date.

    Bucket spreads are volume-weighted medians; buckets are combined with
    maturity-weighted volume shares from `bucket_weights`. Ineligible trades
    (maturity outside (0, 5]) are skipped.
    """
    trades = [t for t in transactions if t.eligible]
    day = on_date if on_date is not None else (trades[0].trade_date if trades else None)
    if not trades:
        raise NoDataError("no eligible transactions", day)
    if any(t.trade_date != day for t in trades):
        raise ValueError("daily_spread expects transactions from a single trade date")

    grouped: dict[MaturityBucket, list[Transaction]] = {b: [] for b in MaturityBucket}
    for t in trades:
        grouped[assign_bucket(t.maturity)].append(t)

    volume: dict[MaturityBucket, float] = {}
    avg_maturity: dict[MaturityBucket, float] = {}
    medians: dict[MaturityBucket, float] = {}
    for bucket, rows in grouped.items():
        v = float(sum(t.volume for t in rows))
        volume[bucket] = v
        if v > 0:
            avg_maturity[bucket] = weighted_avg_maturity(rows)
            medians[bucket] = weighted_median((t.spread, t.volume) for t in rows)
        else:
            avg_maturity[bucket] = 0.0

    if not medians:
        raise NoDataError("eligible transactions carry zero volume", day)

    st = MaturityBucket.ST
    st_w, lt_ws = bucket_weights(
        volume[st],
        avg_maturity[st],
        [(volume[b], avg_maturity[b]) for b in LT_BUCKETS],
    )
    lt_weights = dict(zip(LT_BUCKETS, lt_ws))

    combined = st_w * medians[st] if st in medians else 0.0
    for b in LT_BUCKETS:
        if b in medians:
            combined += lt_weights[b] * medians[b]

    return DailySpreadDecomposition(
        date=day,
        st_spread=medians.get(st),
        lt_bucket_spreads={b: medians[b] for b in LT_BUCKETS if b in medians},
        st_weight=st_w,
        lt_weights=lt_weights,
        daily_spread=float(combined),
        st_volume=volume[st],
        lt_volumes={b: volume[b] for b in LT_BUCKETS},
        weighted_avg_maturity=weighted_avg_maturity(trades),
        trade_count=len(trades),
        st_maturity=avg_maturity[st],
        lt_maturities={b: avg_maturity[b] for b in LT_BUCKETS},
    )
