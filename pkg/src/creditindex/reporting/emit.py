from __future__ import annotations

import logging
from pathlib import Path
from typing import Literal, Optional

import pandas as pd

from creditindex.reporting.data_models import ReportArtifact
from creditindex.reporting.text_report import _log_print, format_table

logger = logging.getLogger(__name__)

ReportFormat = Literal["csv", "table", "json"]
_SUFFIX = {"csv": ".csv", "table": ".txt", "json": ".json"}


def emit_report(
    frame: pd.DataFrame,
    name: str,
    out_dir: Path | str,
    fmt: ReportFormat = "csv",
    *,
    title: Optional[str] = None,
    echo: bool = False,
) -> ReportArtifact:
    """
    Write `frame` to `out_dir/name.{csv,txt,json}` keeping its column order.

    An empty frame still produces a file (a header-only CSV) and logs a warning.
    With `echo`, the table rendering is also printed to the console report.
    """
    if fmt not in _SUFFIX:
        raise ValueError(f"unknown report format {fmt!r}")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    path = out / f"{name}{_SUFFIX[fmt]}"
    if frame.empty:
        logger.warning("%s: empty result set", name)

    if fmt == "csv":
        frame.to_csv(path, index=False, lineterminator="\n")
    elif fmt == "table":
        path.write_text(format_table(frame) + "\n", encoding="utf-8")
    else:
        frame.to_json(path, orient="records", indent=2, double_precision=15)

    if echo:
        _log_print(f"\n{title or name}:")
        _log_print(format_table(frame))
    logger.debug("wrote %s (%d rows)", path, len(frame))
    return ReportArtifact(name=name, path=path, fmt=fmt, rows=len(frame))
