from __future__ import annotations

from io import StringIO
from pathlib import Path
from typing import Optional

import pandas as pd

from creditindex.reporting.data_models import IndexRunSummary, RiskSummary


class ReportDocument:
    """Collects every line echoed through `_log_print` and writes them to one file."""

    def __init__(self, path: Path) -> None:
        self.path = path
        self.lines: list[str] = []

    def add_text(self, text: str) -> None:
        self.lines.append(text)

    def write(self) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        body = "\n".join(self.lines) if self.lines else "Report contains no data."
        self.path.write_text(body + "\n", encoding="utf-8")


_ACTIVE_REPORT: Optional[ReportDocument] = None


def set_active_report(doc: Optional[ReportDocument]) -> None:
    global _ACTIVE_REPORT
    _ACTIVE_REPORT = doc


def get_active_report() -> Optional[ReportDocument]:
    return _ACTIVE_REPORT


def _log_print(*args, **kwargs) -> None:
    buf = StringIO()
    kwargs_copy = kwargs.copy()
    kwargs_copy["file"] = buf
    print(*args, **kwargs_copy)
    print(*args, **kwargs)
    if _ACTIVE_REPORT is not None:
        _ACTIVE_REPORT.add_text(buf.getvalue().rstrip("\n"))


def _fmt_float(x: float | None, nd: int = 2, as_pct: bool = False) -> str:
    if x is None:
        return "nan"
    try:
        if pd.isna(x):
            return "nan"
        return f"{float(100 * x):.{nd}f}%" if as_pct else f"{float(x):.{nd}f}"
    except (TypeError, ValueError):
        return "nan"


def format_table(frame: pd.DataFrame, nd: int = 4) -> str:
    """Fixed-width rendering used for the `table` output format."""
    if frame.empty:
        return "(no rows)\n" + ", ".join(str(c) for c in frame.columns)
    return frame.to_string(index=False, float_format=lambda v: _fmt_float(v, nd))


def render_table(frame: pd.DataFrame, title: str, nd: int = 4) -> None:
    _log_print(f"\n{title}:")
    _log_print(format_table(frame, nd))


def _stars(p_value: float) -> str:
    if pd.isna(p_value):
        return ""
    if p_value < 0.01:
        return "***"
    if p_value < 0.05:
        return "**"
    if p_value < 0.10:
        return "*"
    return ""


def render_correlation_table(frame: pd.DataFrame, title: str = "Correlations") -> None:
    """
    Correlation rows annotated with significance stars from the p-value row below
    them (* 10%, ** 5%, *** 1%).
    """
    value_columns = [c for c in frame.columns if c not in ("variable", "stat")]
    shown = frame.copy().astype({c: object for c in value_columns})
    for variable, rows in frame.groupby("variable", sort=False):
        corr = rows[rows["stat"] == "correl."]
        pval = rows[rows["stat"] == "p-value"]
        if corr.empty or pval.empty:
            continue
        for column in value_columns:
            r = corr[column].iloc[0]
            p = pval[column].iloc[0]
            shown.loc[corr.index[0], column] = f"{_fmt_float(r, 3)}{_stars(p)}"
            shown.loc[pval.index[0], column] = f"({_fmt_float(p, 3)})"
    _log_print(f"\n{title}:")
    _log_print(shown.to_string(index=False))


def render_index_summary(summary: IndexRunSummary) -> None:
    _log_print(f"\n{summary.scope.upper()} summary:")
    _log_print(
        f"dates with trades={summary.n_dates:,} | "
        f"published values={summary.n_published:,}"
    )
    if summary.n_published:
        _log_print(
            f"published {summary.first_published} .. {summary.last_published} | "
            f"mean={_fmt_float(summary.mean_index, 4)}% | "
            f"mean LT weight={_fmt_float(summary.mean_lt_fraction, 1, as_pct=True)} | "
            f"mean weighted maturity={_fmt_float(summary.mean_weighted_maturity, 2)}y"
        )
    else:
        _log_print(
            "⚠️ No index value published: fewer dates than the rolling window."
        )


def render_risk_summary(summary: RiskSummary) -> None:
    _log_print("\nRisk-adjusted pricing:")
    _log_print(
        f"spread={_fmt_float(summary.spread_pct, 4)}% at c=0 -> "
        f"{_fmt_float(summary.equivalent_spread_pct, 4)}% "
        f"at c={_fmt_float(summary.sensitivity, 2)}"
    )
    _log_print(
        f"discount={_fmt_float(summary.discount_bp, 1)} bp | "
        f"demand impact={_fmt_float(summary.demand_impact_pct, 2)}%"
    )
    _log_print(
        f"RAR reference-only={_fmt_float(summary.rar_reference_only, 4)} | "
        "RAR credit-sensitive at same spread="
        f"{_fmt_float(summary.rar_credit_sensitive, 4)}"
    )
