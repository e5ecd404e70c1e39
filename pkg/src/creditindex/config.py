from __future__ import annotations

import os
from dataclasses import dataclass, field, fields
from datetime import date
from pathlib import Path
from typing import Any, Literal, Mapping, Optional, get_args

from creditindex.calendar import BusinessCalendar
from creditindex.errors import ConfigError

CONFIG_ENV_VAR = "CREDITINDEX_CONFIG"

SigmaDeltaMode = Literal["maturity_weighted", "volume"]


@dataclass
class Config:

    ### INDEX CONSTRUCTION ###

    # Rolling window of daily spreads (business days)
    WINDOW_BUSINESS_DAYS: int = 21

    # 0 labels the value on the last day of its window, 1 on the next business day
    PUBLISH_LAG: int = 0

    # Holidays removed from the weekday calendar
    HOLIDAYS: tuple[date, ...] = ()

    # Fallback to FXI when AXI daily volume drops below this share of its
    # trailing-window median volume
    FALLBACK_VOLUME_FRACTION: float = 0.5

    ### RATES ###

    COMPOUND_WINDOW_DAYS: int = 30
    DAY_COUNT_BASE: int = 360

    # Longest tolerated gap between consecutive rate observations
    MAX_RATE_GAP_DAYS: int = 4

    LIBOR_FALLBACK_SPREAD_BP: float = 11.48
    LIBOR_CUTOVER: date = date(2023, 6, 30)

    ### LOANS ###

    NOTIONAL: float = 1_000_000.0
    LOAN_SPREAD_PCT: float = 1.0
    STRESS_ANCHORS: dict[str, date] = field(
        default_factory=lambda: {
            "Pandemic onset": date(2020, 3, 1),
            "SVB collapse": date(2023, 3, 8),
        }
    )
    HORIZON_MONTHS: tuple[int, ...] = (1, 3, 12)

    ### RISK-ADJUSTED RETURN ###

    CREDIT_SENSITIVITY: float = 0.70
    ELASTICITY: float = 25.0
    SIGMA_DELTA_MODE: SigmaDeltaMode = "maturity_weighted"

    ### STATISTICS ###

    GRANGER_MAX_LAG: int = 4
    CORRELATION_LAGS: int = 3
    SIGNIFICANCE_LEVELS: tuple[float, ...] = (0.05, 0.10)

    ### EXECUTION ###

    NUM_PARALLEL_WORKERS: int = 1

    def validate(self) -> None:
        """
        Validate the Config object has sensible values before running.
        """
        if self.WINDOW_BUSINESS_DAYS <= 0:
            raise ConfigError("WINDOW_BUSINESS_DAYS must be > 0.")
        if self.PUBLISH_LAG not in (0, 1):
            raise ConfigError("PUBLISH_LAG must be 0 or 1.")
        if not (0.0 <= self.FALLBACK_VOLUME_FRACTION <= 1.0):
            raise ConfigError("FALLBACK_VOLUME_FRACTION must be in [0, 1].")
        if self.COMPOUND_WINDOW_DAYS <= 0:
            raise ConfigError("COMPOUND_WINDOW_DAYS must be > 0.")
        if self.DAY_COUNT_BASE != 360:
            raise ConfigError("DAY_COUNT_BASE must be 360 (ACT/360).")
        if self.MAX_RATE_GAP_DAYS < 1:
            raise ConfigError("MAX_RATE_GAP_DAYS must be >= 1.")
        if self.NOTIONAL <= 0:
            raise ConfigError("NOTIONAL must be > 0.")
        if not self.HORIZON_MONTHS or any(h <= 0 for h in self.HORIZON_MONTHS):
            raise ConfigError("HORIZON_MONTHS must be non-empty positive integers.")
        if not (0.0 <= self.CREDIT_SENSITIVITY <= 1.0):
            raise ConfigError("CREDIT_SENSITIVITY must be within [0, 1].")
        if self.ELASTICITY < 0:
            raise ConfigError("ELASTICITY must be non-negative.")
        if self.SIGMA_DELTA_MODE not in get_args(SigmaDeltaMode):
            raise ConfigError(
                f"SIGMA_DELTA_MODE must be one of {get_args(SigmaDeltaMode)}."
            )
        if self.GRANGER_MAX_LAG < 1:
            raise ConfigError("GRANGER_MAX_LAG must be >= 1.")
        if self.CORRELATION_LAGS < 0:
            raise ConfigError("CORRELATION_LAGS must be >= 0.")
        for level in self.SIGNIFICANCE_LEVELS:
            if not (0.0 < level < 1.0):
                raise ConfigError("SIGNIFICANCE_LEVELS must lie in (0, 1).")
        if self.NUM_PARALLEL_WORKERS <= 0:
            raise ConfigError("NUM_PARALLEL_WORKERS must be > 0.")

    @property
    def calendar(self) -> BusinessCalendar:
        return BusinessCalendar.from_holidays(self.HOLIDAYS)

    def as_flat_dict(self) -> dict[str, str]:
        """Stringified view used for run manifests (stable key order)."""
        return {f.name: _format_value(getattr(self, f.name)) for f in fields(self)}


# ----------------------------
# Flat key-value files
# ----------------------------
def parse_flat_file(path: Path) -> dict[str, str]:
    """Read `KEY = value` lines; blank lines and `#` comments are skipped."""
    out: dict[str, str] = {}
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'KEY = value', got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        out[key] = value
    return out


def _format_value(value: Any) -> str:
    if isinstance(value, date):
        return value.isoformat()
    if isinstance(value, dict):
        return ";".join(f"{k}:{_format_value(v)}" for k, v in value.items())
    if isinstance(value, (tuple, list)):
        return ",".join(_format_value(v) for v in value)
    return str(value)


def _parse_dates(text: str) -> tuple[date, ...]:
    return tuple(date.fromisoformat(p.strip()) for p in text.split(",") if p.strip())


def _parse_anchors(text: str) -> dict[str, date]:
    anchors: dict[str, date] = {}
    for item in text.split(";"):
        if not item.strip():
            continue
        name, _, day = item.rpartition(":")
        if not name:
            raise ConfigError(
                f"Stress anchor {item!r} must look like 'Name:YYYY-MM-DD'."
            )
        anchors[name.strip()] = date.fromisoformat(day.strip())
    return anchors


_COERCE = {
    "HOLIDAYS": _parse_dates,
    "LIBOR_CUTOVER": lambda s: date.fromisoformat(s),
    "STRESS_ANCHORS": _parse_anchors,
    "HORIZON_MONTHS": lambda s: tuple(int(p) for p in s.split(",") if p.strip()),
    "SIGNIFICANCE_LEVELS": lambda s: tuple(
        float(p) for p in s.split(",") if p.strip()
    ),
}


def apply_overrides(cfg: Config, overrides: Mapping[str, Any]) -> Config:
    """
    Apply string (or already typed) overrides onto `cfg` in place.

    Unknown keys raise ConfigError so typos in config files are not silently ignored.
    """
    known = {f.name: f for f in fields(cfg)}
    for key, raw in overrides.items():
        name = key.strip().upper()
        if name not in known:
            raise ConfigError(f"Unknown configuration key {key!r}.")
        current = getattr(cfg, name)
        if not isinstance(raw, str):
            setattr(cfg, name, raw)
            continue
        try:
            if name in _COERCE:
                value: Any = _COERCE[name](raw)
            elif isinstance(current, bool):
                value = raw.lower() in ("1", "true", "yes", "on")
            elif isinstance(current, int):
                value = int(raw)
            elif isinstance(current, float):
                value = float(raw)
            else:
                value = raw
        except ValueError as exc:
            raise ConfigError(f"Invalid value for {name}: {raw!r} ({exc})") from exc
        setattr(cfg, name, value)
    return cfg


def load_config(path: Optional[Path] = None) -> Config:
    """
    Build a Config from defaults, then the config file.

    The file is `path` when given, else the file named by CREDITINDEX_CONFIG if set.
    """
    cfg_obj = Config()
    source = path or (
        Path(os.environ[CONFIG_ENV_VAR]) if os.environ.get(CONFIG_ENV_VAR) else None
    )
    if source is not None:
        apply_overrides(cfg_obj, parse_flat_file(Path(source)))
    cfg_obj.validate()
    return cfg_obj


cfg = Config()
