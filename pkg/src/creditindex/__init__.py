__version__ = "1.0.0"

from creditindex.config import Config, cfg, load_config
from creditindex.index import build_index, compute_index, publish_with_fallback
from creditindex.loans import LoanSpec, stress_report
from creditindex.rates import (
    CompositeRateSpec,
    compounded_average,
    credit_sensitive_rate,
)
from creditindex.risk import PricingPolicy, RarParams, equivalent_spread
from creditindex.series import IndexSeries, RateSeries, SeriesKind
from creditindex.transactions import IndexScope, ScopeTag, Transaction

__all__ = [
    "__version__",
    "Config",
    "cfg",
    "load_config",
    "build_index",
    "compute_index",
    "publish_with_fallback",
    "LoanSpec",
    "stress_report",
    "CompositeRateSpec",
    "compounded_average",
    "credit_sensitive_rate",
    "PricingPolicy",
    "RarParams",
    "equivalent_spread",
    "IndexSeries",
    "RateSeries",
    "SeriesKind",
    "IndexScope",
    "ScopeTag",
    "Transaction",
]
