from __future__ import annotations

from dataclasses import dataclass
from datetime import date
from pathlib import Path
from typing import Optional


@dataclass(frozen=True)
class IndexRunSummary:
    """Headline figures for one computed index."""

    scope: str
    n_dates: int  # dates with a daily spread
    n_published: int  # dates with a full window
    first_published: Optional[date]
    last_published: Optional[date]
    mean_index: float
    mean_lt_fraction: float
    mean_weighted_maturity: float


@dataclass(frozen=True)
class RiskSummary:
    """Spread discount a credit-sensitive loan offers at equal risk-adjusted return."""

    spread_pct: float
    sensitivity: float
    equivalent_spread_pct: float
    discount_bp: float
    demand_impact_pct: float
    rar_reference_only: float
    rar_credit_sensitive: float


@dataclass(frozen=True)
class ReportArtifact:
    name: str
    path: Path
    fmt: str
    rows: int
