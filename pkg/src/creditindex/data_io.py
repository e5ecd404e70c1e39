from __future__ import annotations

import io
import logging
import math
from datetime import date
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

import pandas as pd

from creditindex.errors import SchemaError, ValidationError
from creditindex.index.aggregation import DailySpreadDecomposition
from creditindex.index.engine import match_risk_free
from creditindex.series import IndexSeries, RateSeries, SeriesKind
from creditindex.transactions import LT_BUCKETS, MaturityBucket, ScopeTag, Transaction

logger = logging.getLogger(__name__)

TRANSACTION_COLUMNS = [
    "trade_date",
    "maturity_years",
    "volume_usd",
    "spread_pct",
    "scope",
]
SERIES_COLUMNS = ["date", "value_pct"]

Curve = Sequence[tuple[float, float]]


# ----------------------------
# Shared helpers
# ----------------------------
def _read_text(path: Path | str) -> tuple[dict[str, str], int, str]:
    """Split a file into its leading `# key: value` header, header length and body."""
    text = Path(path).read_text(encoding="utf-8")
    lines = text.splitlines()
    meta: dict[str, str] = {}
    n_comment = 0
    for line in lines:
        stripped = line.strip()
        if not stripped.startswith("#"):
            break
        n_comment += 1
        key, sep, value = stripped.lstrip("#").partition(":")
        if sep:
            meta[key.strip().lower()] = value.strip()
    return meta, n_comment, "\n".join(lines[n_comment:])


def _frame(path: Path | str, body: str, required: Sequence[str]) -> pd.DataFrame:
    if not body.strip():
        raise SchemaError(f"{path}: missing header row")
    frame = pd.read_csv(
        io.StringIO(body), dtype=str, keep_default_na=False, skipinitialspace=True
    ).fillna("")
    frame.columns = [c.strip() for c in frame.columns]
    missing = [c for c in required if c not in frame.columns]
    if missing:
        raise SchemaError(
            f"{path}: header must contain {', '.join(required)}; "
            f"missing {', '.join(missing)}"
        )
    return frame


def _float(raw: str, line: int, column: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise ValidationError(f"not a number: {raw!r}", line, column) from None
    if not math.isfinite(value):
        raise ValidationError(f"value must be finite, got {raw!r}", line, column)
    return value


def _date(raw: str, line: int, column: str) -> date:
    try:
        return date.fromisoformat(raw.strip())
    except ValueError:
        raise ValidationError(f"not an ISO-8601 date: {raw!r}", line, column) from None


def _header(meta: Mapping[str, str]) -> str:
    return "".join(f"# {k}: {v}\n" for k, v in meta.items())


# ----------------------------
# Transactions
# ----------------------------
def parse_transactions(
    path: Path | str,
    curve: Optional[Curve | Mapping[date, Curve]] = None,
) -> list[Transaction]:
    """
    Read a transaction CSV: trade_date, maturity_years, volume_usd, spread_pct, scope.

    A row may leave spread_pct blank and give the all-in trade rate in a rate_pct
    column instead; the spread is then taken over `curve` (one risk-free curve, or
    one per trade date) at the trade's maturity.
    """
    meta, n_comment, body = _read_text(path)
    required = [c for c in TRANSACTION_COLUMNS if c != "spread_pct"]
    frame = _frame(path, body, required)
    if "spread_pct" not in frame.columns and "rate_pct" not in frame.columns:
        raise SchemaError(f"{path}: header needs spread_pct or rate_pct")

    header_line = n_comment + 1
    out: list[Transaction] = []
    for i, row in enumerate(frame.to_dict("records")):
        line = header_line + 1 + i
        trade_date = _date(row["trade_date"], line, "trade_date")
        maturity = _float(row["maturity_years"], line, "maturity_years")
        volume = _float(row["volume_usd"], line, "volume_usd")
        if volume < 0:
            raise ValidationError(
                f"volume must be >= 0, got {volume}", line, "volume_usd"
            )
        spread = _row_spread(row, trade_date, maturity, curve, line)
        try:
            scope = ScopeTag(row["scope"].strip().lower())
        except ValueError:
            raise ValidationError(
                f"unknown scope tag {row['scope']!r} (expected bank or nonbank)",
                line,
                "scope",
            ) from None
        out.append(Transaction(trade_date, maturity, volume, spread, scope))

    if not out:
        logger.warning("%s: no transactions after the header", path)
    elif "generator" in meta:
        logger.debug("%s: %d transactions from %s", path, len(out), meta["generator"])
    return out


def _row_spread(
    row: Mapping[str, str],
    trade_date: date,
    maturity: float,
    curve: Optional[Curve | Mapping[date, Curve]],
    line: int,
) -> float:
    raw = row.get("spread_pct", "").strip()
    if raw:
        return _float(raw, line, "spread_pct")
    rate_raw = row.get("rate_pct", "").strip()
    if not rate_raw:
        raise ValidationError(
            "either spread_pct or rate_pct is required", line, "spread_pct"
        )
    rate = _float(rate_raw, line, "rate_pct")
    day_curve = curve.get(trade_date) if isinstance(curve, Mapping) else curve
    if not day_curve:
        raise ValidationError(
            f"no risk-free curve for {trade_date.isoformat()}", line, "rate_pct"
        )
    return match_risk_free(rate, maturity, day_curve)


def write_transactions(
    path: Path | str,
    transactions: Iterable[Transaction],
    meta: Optional[Mapping[str, str]] = None,
) -> Path:
    """Write transactions in the CSV schema read by `parse_transactions`."""
    path = Path(path)
    frame = pd.DataFrame(
        [
            (
                t.trade_date.isoformat(),
                t.maturity,
                t.volume,
                t.spread,
                t.scope_tag.value,
            )
            for t in transactions
        ],
        columns=TRANSACTION_COLUMNS,
    )
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(_header(meta or {}))
        frame.to_csv(fh, index=False, lineterminator="\n")
    return path


# ----------------------------
# Dated series
# ----------------------------
def parse_series(path: Path | str, name: Optional[str] = None) -> RateSeries:
    """
    Read a `date,value_pct` CSV with a `# kind: <kind>` comment header.

    Rows are sorted by date; a repeated date is an error. Without a kind header
    the series is treated as a composite rate.
    """
    path = Path(path)
    meta, n_comment, body = _read_text(path)
    frame = _frame(path, body, SERIES_COLUMNS)

    raw_kind = meta.get("kind")
    if raw_kind is None:
        logger.warning("%s: no '# kind:' header, assuming composite", path)
        kind = SeriesKind.COMPOSITE
    else:
        try:
            kind = SeriesKind(raw_kind.strip().lower())
        except ValueError:
            raise SchemaError(f"{path}: unknown series kind {raw_kind!r}") from None

    header_line = n_comment + 1
    seen: dict[date, int] = {}
    dates: list[date] = []
    values: list[float] = []
    for i, row in enumerate(frame.to_dict("records")):
        line = header_line + 1 + i
        day = _date(row["date"], line, "date")
        if day in seen:
            raise ValidationError(
                f"duplicate date {day.isoformat()} (first on line {seen[day]})",
                line,
                "date",
            )
        seen[day] = line
        dates.append(day)
        values.append(_float(row["value_pct"], line, "value_pct"))

    series = pd.Series(values, index=pd.DatetimeIndex(dates), dtype=float).sort_index()
    return RateSeries(
        name=name or meta.get("name") or path.stem,
        values=series,
        unit=meta.get("unit", "percent p.a."),
        calendar_id=meta.get("calendar", "weekdays"),
        kind=kind,
    )


def write_series(
    path: Path | str,
    series: IndexSeries,
    meta: Optional[Mapping[str, str]] = None,
) -> Path:
    """Write a series with its kind, name, unit and calendar in the comment header."""
    path = Path(path)
    header = {
        "kind": series.kind.value,
        "name": series.name,
        "unit": series.unit,
        "calendar": series.calendar_id,
        **(meta or {}),
    }
    frame = pd.DataFrame(
        {
            "date": [ts.date().isoformat() for ts in series.values.index],
            "value_pct": series.values.to_numpy(dtype=float),
        },
        columns=SERIES_COLUMNS,
    )
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(_header(header))
        frame.to_csv(fh, index=False, lineterminator="\n")
    return path


# ----------------------------
# Daily decompositions
# ----------------------------
_LT_KEYS = {b: b.value.lower() for b in LT_BUCKETS}

DECOMPOSITION_COLUMNS = (
    ["date", "daily_spread", "st_spread"]
    + [f"{k}_spread" for k in _LT_KEYS.values()]
    + ["st_weight"]
    + [f"{k}_weight" for k in _LT_KEYS.values()]
    + ["lt_weight", "st_volume"]
    + [f"{k}_volume" for k in _LT_KEYS.values()]
    + ["st_maturity"]
    + [f"{k}_maturity" for k in _LT_KEYS.values()]
    + ["weighted_avg_maturity", "trade_count"]
)


def decompositions_frame(
    decompositions: Sequence[DailySpreadDecomposition],
) -> pd.DataFrame:
    """One row per date; bucket spreads are blank for buckets without volume."""
    rows = []
    for d in decompositions:
        row: dict[str, object] = {
            "date": d.date.isoformat(),
            "daily_spread": d.daily_spread,
            "st_spread": d.st_spread,
            "st_weight": d.st_weight,
            "lt_weight": d.lt_weight,
            "st_volume": d.st_volume,
            "st_maturity": d.st_maturity,
            "weighted_avg_maturity": d.weighted_avg_maturity,
            "trade_count": d.trade_count,
        }
        for bucket, key in _LT_KEYS.items():
            row[f"{key}_spread"] = d.lt_bucket_spreads.get(bucket)
            row[f"{key}_weight"] = d.lt_weights.get(bucket, 0.0)
            row[f"{key}_volume"] = d.lt_volumes.get(bucket, 0.0)
            row[f"{key}_maturity"] = d.lt_maturities.get(bucket, 0.0)
        rows.append(row)
    return pd.DataFrame(rows, columns=DECOMPOSITION_COLUMNS)


def write_decompositions(
    path: Path | str,
    decompositions: Sequence[DailySpreadDecomposition],
    meta: Optional[Mapping[str, str]] = None,
) -> Path:
    path = Path(path)
    with path.open("w", encoding="utf-8", newline="") as fh:
        fh.write(_header(meta or {}))
        frame = decompositions_frame(decompositions)
        frame.to_csv(fh, index=False, lineterminator="\n")
    return path


def parse_decompositions(path: Path | str) -> list[DailySpreadDecomposition]:
    """Read back the CSV written by `write_decompositions`."""
    _, n_comment, body = _read_text(path)
    frame = _frame(path, body, DECOMPOSITION_COLUMNS)
    header_line = n_comment + 1
    out: list[DailySpreadDecomposition] = []

    for i, row in enumerate(frame.to_dict("records")):
        line = header_line + 1 + i

        def num(column: str) -> float:
            return _float(row[column], line, column)

        def optional(column: str) -> Optional[float]:
            return num(column) if row[column].strip() else None

        lt_spreads: dict[MaturityBucket, float] = {}
        for bucket, key in _LT_KEYS.items():
            value = optional(f"{key}_spread")
            if value is not None:
                lt_spreads[bucket] = value
        out.append(
            DailySpreadDecomposition(
                date=_date(row["date"], line, "date"),
                st_spread=optional("st_spread"),
                lt_bucket_spreads=lt_spreads,
                st_weight=num("st_weight"),
                lt_weights={b: num(f"{k}_weight") for b, k in _LT_KEYS.items()},
                daily_spread=num("daily_spread"),
                st_volume=num("st_volume"),
                lt_volumes={b: num(f"{k}_volume") for b, k in _LT_KEYS.items()},
                weighted_avg_maturity=num("weighted_avg_maturity"),
                trade_count=int(num("trade_count")),
                st_maturity=num("st_maturity"),
                lt_maturities={b: num(f"{k}_maturity") for b, k in _LT_KEYS.items()},
            )
        )
    return out
