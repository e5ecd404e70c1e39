from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd

from creditindex.config import SigmaDeltaMode
from creditindex.errors import DegenerateDenominatorError, NoDataError
from creditindex.index.aggregation import DailySpreadDecomposition
from creditindex.series import IndexSeries


@dataclass(frozen=True)
class RarParams:
    """
    Index mean and volatility, and the mean and volatility of a bank's own
    deviation from the index (percent). Defaults are the long-run estimates.
    """

    mean_axi: float = 0.5141
    sigma_axi: float = 0.2987
    mean_delta: float = -0.0020
    sigma_delta: float = 0.3156

    def __post_init__(self) -> None:
        if self.sigma_axi < 0 or self.sigma_delta < 0:
            raise ValueError("volatilities must be non-negative")


@dataclass(frozen=True)
class PricingPolicy:
    fixed_spread: float
    sensitivity: float = 0.0

    def __post_init__(self) -> None:
        if not (0.0 <= self.sensitivity <= 1.0):
            raise ValueError(
                f"sensitivity must be within [0, 1], got {self.sensitivity}"
            )


def _risk(c: float, params: RarParams) -> float:
    return math.sqrt((c - 1.0) ** 2 * params.sigma_axi**2 + params.sigma_delta**2)


def risk_adjusted_return(policy: PricingPolicy, params: RarParams) -> float:
    """
    Expected loan margin over funding per unit of margin volatility:

        (s + (c - 1) * mean_axi) / sqrt((c - 1)^2 * sigma_axi^2 + sigma_delta^2)

    Index moves and bank deviations are taken as uncorrelated.
    """
    c = policy.sensitivity
    denominator = _risk(c, params)
    if denominator == 0:
        raise DegenerateDenominatorError(
            f"margin volatility is zero at sensitivity {c} (sigma_delta = 0)"
        )
    return (policy.fixed_spread + (c - 1.0) * params.mean_axi) / denominator


def volatility_ratio(c: float, params: RarParams) -> float:
    """Margin volatility at sensitivity c relative to a loan with no index exposure."""
    if not (0.0 <= c <= 1.0):
        raise ValueError(f"sensitivity must be within [0, 1], got {c}")
    base = _risk(0.0, params)
    if base == 0:
        raise DegenerateDenominatorError("both volatilities are zero")
    return _risk(c, params) / base


def equivalent_spread(s: float, c: float, params: RarParams) -> float:
    """
    Fixed spread at sensitivity c that keeps the risk-adjusted return of a loan
    priced at spread s with no index exposure.
    """
    ratio = volatility_ratio(c, params)
    return (1.0 - c) * params.mean_axi + (s - params.mean_axi) * ratio


def discount_curve(
    s: float,
    params: RarParams,
    grid: Optional[Sequence[float]] = None,
) -> pd.DataFrame:
    """Equivalent spread and discount over a grid of sensitivities."""
    cs = np.linspace(0.0, 1.0, 101) if grid is None else np.asarray(grid, dtype=float)
    if cs.size and (cs.min() < 0.0 or cs.max() > 1.0):
        raise ValueError("sensitivity grid must lie within [0, 1]")
    primes = np.array([equivalent_spread(s, float(c), params) for c in cs])
    return pd.DataFrame(
        {"c": cs, "spread_prime_pct": primes, "discount_bp": (s - primes) * 100.0}
    )


def _bucket_shares(
    d: DailySpreadDecomposition, mode: SigmaDeltaMode
) -> tuple[float, float]:
    if mode == "maturity_weighted":
        return d.lt_weight, d.st_weight
    if mode == "volume":
        total = d.total_volume
        if total <= 0:
            return 0.0, 0.0
        return d.lt_volume / total, d.st_volume / total
    raise ValueError(f"unknown sigma_delta mode {mode!r}")


def sigma_delta_estimate(
    decompositions: Sequence[DailySpreadDecomposition],
    mode: SigmaDeltaMode = "maturity_weighted",
) -> float:
    """
    Average daily volatility of a bank's deviation from the index, modelling the
    deviation as a two-point draw between the LT and ST spreads:

        mean over days of sqrt(w_LT * w_ST) * |LT spread - ST spread|

    Days missing either side contribute zero.
    """
    if not decompositions:
        raise NoDataError("sigma_delta_estimate needs at least one decomposition")
    terms = []
    for d in decompositions:
        lt, st = d.lt_spread, d.st_spread
        if lt is None or st is None:
            terms.append(0.0)
            continue
        w_lt, w_st = _bucket_shares(d, mode)
        terms.append(math.sqrt(w_lt * w_st) * abs(lt - st))
    return float(np.mean(terms))


def demand_impact(discount: float, elasticity: float = 25.0) -> float:
    """Percent change in loan demand for a rate discount given in percent."""
    if elasticity < 0:
        raise ValueError("elasticity must be non-negative")
    return discount * elasticity


def estimate_rar_params(
    index: IndexSeries,
    decompositions: Sequence[DailySpreadDecomposition],
    mode: SigmaDeltaMode = "maturity_weighted",
) -> RarParams:
    """
    Fit RarParams from a computed index: its sample mean and standard deviation,
    the average gap between daily spread and index, and sigma_delta_estimate.
    """
    values = index.values
    if len(values) < 2:
        raise NoDataError(f"{index.name} needs at least two values")
    daily = pd.Series(
        [d.daily_spread for d in decompositions],
        index=pd.DatetimeIndex([pd.Timestamp(d.date) for d in decompositions]),
        dtype=float,
    )
    gap = (daily - values).dropna()
    return RarParams(
        mean_axi=float(values.mean()),
        sigma_axi=float(values.std(ddof=1)),
        mean_delta=float(gap.mean()) if len(gap) else 0.0,
        sigma_delta=sigma_delta_estimate(decompositions, mode),
    )
