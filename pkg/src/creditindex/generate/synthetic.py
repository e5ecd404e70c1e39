from __future__ import annotations

from dataclasses import dataclass, field, fields
from datetime import date
from pathlib import Path
from typing import Any, Optional

import numpy as np
import pandas as pd

from creditindex.calendar import BusinessCalendar
from creditindex.config import parse_flat_file
from creditindex.errors import ConfigError, NoDataError
from creditindex.series import IndexSeries, RateSeries, SeriesKind
from creditindex.transactions import MaturityBucket, ScopeTag, Transaction

GENERATOR_VERSION = "creditindex-synth/1 (numpy PCG64)"

_BUCKETS = tuple(MaturityBucket)
_MIN_MATURITY = 1.0 / 365.0


# ----------------------------
# Configuration containers
# ----------------------------
@dataclass(slots=True, frozen=True)
class StressWindow:
    """A date range in which LT spreads and bucket volumes are scaled."""

    start: date
    end: date
    lt_spread_multiplier: float = 8.0
    st_volume_multiplier: float = 0.5
    lt_volume_multiplier: float = 1.0

    def contains(self, day: date) -> bool:
        return self.start <= day <= self.end

    def validate(self) -> None:
        if self.end < self.start:
            raise ConfigError(
                f"Stress window {self.start}..{self.end} ends before it starts."
            )
        for name in (
            "lt_spread_multiplier",
            "st_volume_multiplier",
            "lt_volume_multiplier",
        ):
            if not getattr(self, name) > 0:
                raise ConfigError(f"Stress window {name} must be > 0.")


@dataclass(slots=True)
class SyntheticConfig:
    """
    Configuration for generation of a synthetic transaction pool.

    Per-bucket tuples run ST, LT1, LT2, LT3, LT4.
    """

    seed: Optional[int] = 7
    start: date = date(2023, 1, 2)
    end: date = date(2023, 12, 29)
    holidays: tuple[date, ...] = ()

    # Mean daily bank dollar volume per bucket
    bucket_volume: tuple[float, ...] = (360e9, 25.5e9, 25.5e9, 25.5e9, 25.5e9)

    # Calm-regime spread level per bucket (percent)
    bucket_spread: tuple[float, ...] = (0.07, 0.60, 0.72, 0.80, 0.85)

    trades_per_bucket: tuple[int, ...] = (20, 6, 6, 6, 6)

    # Lognormal sigma of trade size around the bucket mean
    volume_dispersion: float = 0.75

    # Cross-sectional spread noise within a bucket on one day (percent)
    spread_dispersion: float = 0.03

    # Daily mean-reverting drift of each bucket level
    mean_reversion: float = 0.10
    spread_volatility: float = 0.01

    # Non-bank trades (FXI only): volume relative to bank volume and spread premium
    nonbank_volume_ratio: float = 2.0
    nonbank_spread_premium: float = 0.20

    stress_windows: tuple[StressWindow, ...] = field(default_factory=tuple)

    # Overnight risk-free rate (percent)
    overnight_level: float = 5.30
    overnight_volatility: float = 0.005

    def validate(self) -> None:
        if self.end < self.start:
            raise ConfigError("end must not precede start.")
        n = len(_BUCKETS)
        for name in ("bucket_volume", "bucket_spread", "trades_per_bucket"):
            if len(getattr(self, name)) != n:
                raise ConfigError(f"{name} needs one entry per bucket ({n}).")
        if any(v < 0 for v in self.bucket_volume) or not sum(self.bucket_volume) > 0:
            raise ConfigError(
                "bucket_volume must be non-negative with a positive total."
            )
        if any(k <= 0 for k in self.trades_per_bucket):
            raise ConfigError("trades_per_bucket must be positive integers.")
        if self.volume_dispersion < 0 or self.spread_dispersion < 0:
            raise ConfigError("dispersions must be non-negative.")
        if not (0.0 <= self.mean_reversion <= 1.0):
            raise ConfigError("mean_reversion must be in [0,1].")
        if self.spread_volatility < 0 or self.overnight_volatility < 0:
            raise ConfigError("volatilities must be non-negative.")
        if self.nonbank_volume_ratio < 0:
            raise ConfigError("nonbank_volume_ratio must be non-negative.")
        for window in self.stress_windows:
            window.validate()
            if window.start < self.start or window.end > self.end:
                raise ConfigError(
                    f"Stress window {window.start}..{window.end} lies outside the span."
                )
        if self.seed is not None and not isinstance(self.seed, int):
            raise ConfigError("seed must be an int or None.")

    @property
    def calendar(self) -> BusinessCalendar:
        return BusinessCalendar.from_holidays(self.holidays)

    def business_days(self) -> pd.DatetimeIndex:
        days = self.calendar.business_days(self.start, self.end)
        if len(days) == 0:
            raise NoDataError(f"no business days between {self.start} and {self.end}")
        return days

    def window_on(self, day: date) -> Optional[StressWindow]:
        for window in self.stress_windows:
            if window.contains(day):
                return window
        return None


# ----------------------------
# Generation helpers
# ----------------------------
def _rng(seed: Optional[int], stream: int = 0) -> np.random.Generator:
    if seed is None:
        return np.random.default_rng()
    if stream:
        return np.random.default_rng([seed, stream])
    return np.random.default_rng(seed)


def _maturity_range(bucket: MaturityBucket) -> tuple[float, float]:
    lo, hi = bucket.bounds
    return (max(lo, _MIN_MATURITY), hi)


def _regime(cfg: SyntheticConfig, day: date) -> tuple[np.ndarray, np.ndarray]:
    """Spread and volume multipliers per bucket on `day`."""
    spread_mult = np.ones(len(_BUCKETS))
    volume_mult = np.ones(len(_BUCKETS))
    window = cfg.window_on(day)
    if window is not None:
        spread_mult[1:] = window.lt_spread_multiplier
        volume_mult[0] = window.st_volume_multiplier
        volume_mult[1:] = window.lt_volume_multiplier
    return spread_mult, volume_mult


# ----------------------------
# Core API
# ----------------------------
def generate_synthetic(cfg: SyntheticConfig) -> list[Transaction]:
    """
    Seeded transaction pool over the business days of the configured span.

    Each bucket level follows its calm spread plus a mean-reverting daily drift;
    stress windows multiply LT levels and rescale volumes. Trade sizes are
    lognormal with mean equal to the bucket volume split over its trades.
    """
    cfg.validate()
    g = _rng(cfg.seed)
    days = cfg.business_days()

    levels = np.asarray(cfg.bucket_spread, dtype=float)
    scales = np.asarray(cfg.bucket_volume, dtype=float)
    sigma = cfg.volume_dispersion
    drift = np.zeros(len(_BUCKETS))
    scopes = [(ScopeTag.BANK, 1.0, 0.0)]
    if cfg.nonbank_volume_ratio > 0:
        scopes.append(
            (ScopeTag.NONBANK, cfg.nonbank_volume_ratio, cfg.nonbank_spread_premium)
        )

    out: list[Transaction] = []
    for ts in days:
        day = ts.date()
        drift = drift * (1.0 - cfg.mean_reversion) + g.normal(
            0.0, cfg.spread_volatility, size=len(_BUCKETS)
        )
        spread_mult, volume_mult = _regime(cfg, day)
        for b, bucket in enumerate(_BUCKETS):
            n = cfg.trades_per_bucket[b]
            lo, hi = _maturity_range(bucket)
            level = levels[b] * spread_mult[b] + drift[b]
            for tag, volume_ratio, premium in scopes:
                sizes = g.lognormal(-0.5 * sigma**2, sigma, size=n)
                sizes *= scales[b] * volume_mult[b] * volume_ratio / n
                maturities = g.uniform(lo, hi, size=n)
                spreads = level + premium + g.normal(0.0, cfg.spread_dispersion, size=n)
                out.extend(
                    Transaction(day, float(m), float(v), float(s), tag)
                    for m, v, s in zip(maturities, sizes, spreads)
                )
    return out


def generate_overnight_rates(cfg: SyntheticConfig, name: str = "SOFR") -> RateSeries:
    """Overnight risk-free rate on every business day, mean-reverting to its level."""
    cfg.validate()
    g = _rng(cfg.seed, stream=1)
    days = cfg.business_days()
    shocks = g.normal(0.0, cfg.overnight_volatility, size=len(days))
    values = np.empty(len(days))
    deviation = 0.0
    for i, shock in enumerate(shocks):
        deviation = deviation * (1.0 - cfg.mean_reversion) + shock
        values[i] = cfg.overnight_level + deviation
    return RateSeries(
        name=name,
        values=pd.Series(values, index=days),
        calendar_id=cfg.calendar.calendar_id,
        kind=SeriesKind.OVERNIGHT,
    )


def generate_indicator(
    cfg: SyntheticConfig,
    driver: IndexSeries,
    *,
    name: str = "stress indicator",
    loading: float = 1.0,
    lag: int = 1,
    noise: float = 0.05,
) -> RateSeries:
    """
    A stress indicator that follows `driver` with a lag:
    loading * driver[t - lag] + Gaussian noise.
    """
    g = _rng(cfg.seed, stream=2)
    lagged = driver.values.shift(lag).dropna()
    if lagged.empty:
        raise NoDataError(f"{driver.name} is too short for lag {lag}")
    values = loading * lagged + g.normal(0.0, noise, size=len(lagged))
    return RateSeries(
        name=name,
        values=values,
        unit="index points",
        calendar_id=driver.calendar_id,
        kind=SeriesKind.INDICATOR,
    )


# ----------------------------
# Config file
# ----------------------------
def _parse_windows(text: str) -> tuple[StressWindow, ...]:
    windows = []
    for item in text.split(";"):
        if not item.strip():
            continue
        parts = [p.strip() for p in item.split(":")]
        if len(parts) not in (4, 5):
            raise ConfigError(
                f"Stress window {item!r} must look like "
                "'start:end:lt_mult:st_vol_mult[:lt_vol_mult]'."
            )
        windows.append(
            StressWindow(
                date.fromisoformat(parts[0]),
                date.fromisoformat(parts[1]),
                *(float(p) for p in parts[2:]),
            )
        )
    return tuple(windows)


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(p) for p in text.split(",") if p.strip())


_SYNTH_COERCE: dict[str, Any] = {
    "seed": lambda s: None if s.lower() == "none" else int(s),
    "start": date.fromisoformat,
    "end": date.fromisoformat,
    "holidays": lambda s: tuple(
        date.fromisoformat(p.strip()) for p in s.split(",") if p.strip()
    ),
    "bucket_volume": _floats,
    "bucket_spread": _floats,
    "trades_per_bucket": lambda s: tuple(int(p) for p in s.split(",") if p.strip()),
    "stress_windows": _parse_windows,
}


def load_synthetic_config(path: Path | str) -> SyntheticConfig:
    """Build a SyntheticConfig from a flat `key = value` file of field names."""
    cfg = SyntheticConfig()
    known = {f.name for f in fields(cfg)}
    for key, raw in parse_flat_file(Path(path)).items():
        name = key.strip().lower()
        if name not in known:
            raise ConfigError(f"Unknown synthetic config key {key!r}.")
        try:
            value = _SYNTH_COERCE[name](raw) if name in _SYNTH_COERCE else float(raw)
        except ValueError as exc:
            raise ConfigError(f"Invalid value for {name}: {raw!r} ({exc})") from exc
        setattr(cfg, name, value)
    cfg.validate()
    return cfg
