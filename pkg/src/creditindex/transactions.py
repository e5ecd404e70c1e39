from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date, datetime
from enum import Enum
from typing import Any

from creditindex.errors import IneligibleTransactionError


class ScopeTag(str, Enum):
    """Issuer scope of a trade: bank trades feed AXI, all trades feed FXI."""

    BANK = "bank"
    NONBANK = "nonbank"


class IndexScope(str, Enum):
    AXI = "axi"
    FXI = "fxi"

    def admits(self, tag: ScopeTag) -> bool:
        return self is IndexScope.FXI or tag is ScopeTag.BANK


class MaturityBucket(str, Enum):
    """
    Maturity buckets partitioning (0, 5] years.

    ST = [0, 1), LT1 = [1, 2), LT2 = [2, 3), LT3 = [3, 4), LT4 = [4, 5].
    """

    ST = "ST"
    LT1 = "LT1"
    LT2 = "LT2"
    LT3 = "LT3"
    LT4 = "LT4"

    @property
    def bounds(self) -> tuple[float, float]:
        lo = float(_ORDER.index(self))
        return lo, lo + 1.0

    @property
    def is_long_term(self) -> bool:
        return self is not MaturityBucket.ST


_ORDER: tuple[MaturityBucket, ...] = tuple(MaturityBucket)
LT_BUCKETS: tuple[MaturityBucket, ...] = _ORDER[1:]
MAX_MATURITY_YEARS = 5.0


def assign_bucket(maturity: float) -> MaturityBucket:
    """Return the bucket holding `maturity` (years) under the half-open convention."""
    if not math.isfinite(maturity) or maturity <= 0.0 or maturity > MAX_MATURITY_YEARS:
        raise IneligibleTransactionError(
            f"Maturity {maturity!r} years is outside the eligible range (0, 5]."
        )
    if maturity == MAX_MATURITY_YEARS:
        return MaturityBucket.LT4
    return _ORDER[int(math.floor(maturity))]


def is_eligible(maturity: float) -> bool:
    return math.isfinite(maturity) and 0.0 < maturity <= MAX_MATURITY_YEARS


def _normalize_date(value: Any) -> date:
    if isinstance(value, datetime):
        return value.date()
    if isinstance(value, date):
        return value
    raise TypeError("trade_date must be datetime.date or datetime.datetime.")


@dataclass(slots=True, frozen=True)
class Transaction:
    """
    One unsecured wholesale funding trade.

    maturity is in years (actual/365), volume in USD, spread in percent per annum
    over the matched-tenor risk-free rate.
    """

    trade_date: date
    maturity: float
    volume: float
    spread: float
    scope_tag: ScopeTag = ScopeTag.BANK

    def __post_init__(self) -> None:
        object.__setattr__(self, "trade_date", _normalize_date(self.trade_date))
        object.__setattr__(self, "scope_tag", ScopeTag(self.scope_tag))
        if not (self.volume >= 0.0) or not math.isfinite(self.volume):
            raise ValueError(f"volume must be a finite value >= 0, got {self.volume!r}")
        if not math.isfinite(self.spread):
            raise ValueError(f"spread must be finite, got {self.spread!r}")
        if not math.isfinite(self.maturity):
            raise ValueError(f"maturity must be finite, got {self.maturity!r}")

    @property
    def eligible(self) -> bool:
        return is_eligible(self.maturity)

    @property
    def bucket(self) -> MaturityBucket:
        return assign_bucket(self.maturity)

    def scaled(
        self, volume_factor: float = 1.0, spread_shift: float = 0.0
    ) -> "Transaction":
        return Transaction(
            trade_date=self.trade_date,
            maturity=self.maturity,
            volume=self.volume * volume_factor,
            spread=self.spread + spread_shift,
            scope_tag=self.scope_tag,
        )
