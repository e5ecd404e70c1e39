from __future__ import annotations

from .data_models import IndexRunSummary, ReportArtifact, RiskSummary
from .emit import ReportFormat, emit_report
from .text_report import (
    ReportDocument,
    format_table,
    render_correlation_table,
    render_index_summary,
    render_risk_summary,
    render_table,
    set_active_report,
)

__all__ = [
    "emit_report",
    "format_table",
    "IndexRunSummary",
    "ReportArtifact",
    "ReportDocument",
    "ReportFormat",
    "RiskSummary",
    "render_correlation_table",
    "render_index_summary",
    "render_risk_summary",
    "render_table",
    "set_active_report",
]
