from creditindex.index.aggregation import (
    DailySpreadDecomposition,
    bucket_weights,
    daily_spread,
    weighted_avg_maturity,
    weighted_median,
)
from creditindex.index.engine import (
    IndexBuild,
    SourceFlag,
    build_index,
    compute_index,
    decompose_days,
    default_fallback_threshold,
    fallback_value,
    lt_weight_fraction,
    match_risk_free,
    normalize_to,
    publish_with_fallback,
    rolling_index,
    spread_summary,
    volume_summary,
)

__all__ = [
    "DailySpreadDecomposition",
    "IndexBuild",
    "SourceFlag",
    "bucket_weights",
    "build_index",
    "compute_index",
    "daily_spread",
    "decompose_days",
    "default_fallback_threshold",
    "fallback_value",
    "lt_weight_fraction",
    "match_risk_free",
    "normalize_to",
    "publish_with_fallback",
    "rolling_index",
    "spread_summary",
    "volume_summary",
    "weighted_avg_maturity",
    "weighted_median",
]
