from __future__ import annotations

import math
from datetime import date

import numpy as np
import pytest

from creditindex.errors import DegenerateDenominatorError, NoDataError
from creditindex.generate.synthetic import SyntheticConfig, generate_synthetic
from creditindex.index import build_index
from creditindex.index.aggregation import DailySpreadDecomposition
from creditindex.risk import (
    PricingPolicy,
    RarParams,
    demand_impact,
    discount_curve,
    equivalent_spread,
    estimate_rar_params,
    risk_adjusted_return,
    sigma_delta_estimate,
    volatility_ratio,
)
from creditindex.transactions import LT_BUCKETS, MaturityBucket

TABLE = RarParams()


def _decomposition(st: float, lt: float, st_weight: float) -> DailySpreadDecomposition:
    lt_weights = {b: 0.0 for b in LT_BUCKETS}
    lt_weights[MaturityBucket.LT1] = 1.0 - st_weight
    return DailySpreadDecomposition(
        date=date(2023, 1, 2),
        st_spread=st,
        lt_bucket_spreads={MaturityBucket.LT1: lt},
        st_weight=st_weight,
        lt_weights=lt_weights,
        daily_spread=st_weight * st + (1 - st_weight) * lt,
        st_volume=100.0,
        lt_volumes={b: (100.0 if b is MaturityBucket.LT1 else 0.0) for b in LT_BUCKETS},
        weighted_avg_maturity=1.0,
    )


# -----------------------------
# Risk-adjusted return
# -----------------------------
def test_table_defaults() -> None:
    assert (TABLE.mean_axi, TABLE.sigma_axi, TABLE.mean_delta, TABLE.sigma_delta) == (
        0.5141,
        0.2987,
        -0.0020,
        0.3156,
    )
    with pytest.raises(ValueError):
        RarParams(sigma_axi=-0.1)


def test_risk_adjusted_return_examples() -> None:
    assert risk_adjusted_return(PricingPolicy(1.0, 1.0), TABLE) == pytest.approx(
        1.0 / 0.3156
    )
    assert risk_adjusted_return(PricingPolicy(1.0, 1.0), TABLE) == pytest.approx(
        3.168, abs=1e-3
    )
    assert risk_adjusted_return(PricingPolicy(1.0, 0.0), TABLE) == pytest.approx(
        1.118, abs=1e-3
    )
    assert risk_adjusted_return(PricingPolicy(TABLE.mean_axi, 0.0), TABLE) == 0.0


def test_risk_adjusted_return_degenerate() -> None:
    params = RarParams(sigma_delta=0.0)
    with pytest.raises(DegenerateDenominatorError):
        risk_adjusted_return(PricingPolicy(1.0, 1.0), params)


def test_pricing_policy_bounds() -> None:
    with pytest.raises(ValueError):
        PricingPolicy(1.0, 1.2)


# -----------------------------
# Equivalent spread and discount
# -----------------------------
def test_equivalent_spread_headline_discounts() -> None:
    assert equivalent_spread(1.0, 0.0, TABLE) == pytest.approx(1.0, abs=1e-15)
    at_70 = 1.0 - equivalent_spread(1.0, 0.70, TABLE)
    assert equivalent_spread(1.0, 0.70, TABLE) == pytest.approx(0.52, abs=0.01)
    assert 0.47 <= at_70 <= 0.49
    at_100 = 1.0 - equivalent_spread(1.0, 1.0, TABLE)
    assert 0.64 <= at_100 <= 0.66


def test_volatility_ratio_bounds() -> None:
    assert volatility_ratio(0.0, TABLE) == 1.0
    for c in np.linspace(0.01, 1.0, 50):
        assert 0.0 < volatility_ratio(float(c), TABLE) < 1.0


def test_rar_fixed_point_on_random_draws() -> None:
    rng = np.random.default_rng(42)
    for _ in range(10_000):
        params = RarParams(
            mean_axi=float(rng.uniform(-1, 2)),
            sigma_axi=float(rng.uniform(0.01, 1)),
            mean_delta=float(rng.uniform(-0.1, 0.1)),
            sigma_delta=float(rng.uniform(0.01, 1)),
        )
        s = float(rng.uniform(0, 3))
        c = float(rng.uniform(0, 1))
        prime = equivalent_spread(s, c, params)
        lhs = risk_adjusted_return(PricingPolicy(prime, c), params)
        rhs = risk_adjusted_return(PricingPolicy(s, 0.0), params)
        assert lhs == pytest.approx(rhs, rel=0, abs=1e-10)


def test_discount_curve_shape_and_monotonicity() -> None:
    curve = discount_curve(1.0, TABLE)
    assert list(curve.columns) == ["c", "spread_prime_pct", "discount_bp"]
    assert len(curve) == 101
    assert curve["discount_bp"].iloc[0] == pytest.approx(0.0, abs=1e-12)
    assert (np.diff(curve["discount_bp"].to_numpy()) >= -1e-12).all()
    row_70 = curve.loc[np.isclose(curve["c"], 0.70)]
    assert 47 <= float(row_70["discount_bp"].iloc[0]) <= 49
    assert 64 <= float(curve["discount_bp"].iloc[-1]) <= 66


def test_rar_nondecreasing_in_sensitivity_when_spread_covers_mean() -> None:
    grid = np.linspace(0, 1, 21)
    values = [risk_adjusted_return(PricingPolicy(1.0, c), TABLE) for c in grid]
    assert all(b >= a - 1e-12 for a, b in zip(values, values[1:]))


def test_discount_curve_rejects_out_of_range_grid() -> None:
    with pytest.raises(ValueError):
        discount_curve(1.0, TABLE, grid=[0.0, 1.5])


def test_demand_impact() -> None:
    assert demand_impact(0.48, 25) == pytest.approx(12.0, abs=0.01)
    assert demand_impact(0.0, 25) == 0.0
    assert demand_impact(0.65, 25) == pytest.approx(16.25)


# -----------------------------
# Deviation volatility
# -----------------------------
def test_sigma_delta_zero_when_lt_equals_st() -> None:
    days = [_decomposition(0.4, 0.4, w) for w in (0.2, 0.5, 0.7)]
    assert sigma_delta_estimate(days) == pytest.approx(0.0, abs=1e-15)


def test_sigma_delta_half_weights_one_percent_gap() -> None:
    days = [_decomposition(0.1, 1.1, 0.5)] * 10
    assert sigma_delta_estimate(days) == pytest.approx(0.5)
    assert sigma_delta_estimate(days, mode="volume") == pytest.approx(0.5)


def test_sigma_delta_errors() -> None:
    with pytest.raises(NoDataError):
        sigma_delta_estimate([])
    with pytest.raises(ValueError):
        sigma_delta_estimate(
            [_decomposition(0.1, 0.2, 0.5)], mode="bogus"  # type: ignore[arg-type]
        )


def test_sigma_delta_is_stable_across_seeds() -> None:
    estimates = []
    for seed in range(20):
        cfg = SyntheticConfig(seed=seed, start=date(2023, 1, 2), end=date(2023, 2, 28))
        build = build_index(generate_synthetic(cfg))
        estimates.append(sigma_delta_estimate(build.decompositions))
    arr = np.array(estimates)
    assert (arr > 0).all()
    assert arr.std(ddof=1) / arr.mean() < 0.20


def test_estimate_rar_params_from_synthetic_index(calm_synth: SyntheticConfig) -> None:
    build = build_index(generate_synthetic(calm_synth))
    params = estimate_rar_params(build.index, build.decompositions)
    assert params.mean_axi == pytest.approx(float(build.index.values.mean()))
    assert params.sigma_axi >= 0.0
    assert math.isfinite(params.mean_delta)
    expected = sigma_delta_estimate(build.decompositions)
    assert params.sigma_delta == pytest.approx(expected)
