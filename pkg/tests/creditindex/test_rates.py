from __future__ import annotations

from datetime import date

import numpy as np
import pandas as pd
import pytest

from creditindex.calendar import BusinessCalendar
from creditindex.errors import AlignmentError, MissingDataError
from creditindex.rates import (
    CompositeRateSpec,
    averaging_method_gap,
    calibrate_equivalent_spread,
    compounded_average,
    credit_sensitive_rate,
    libor_proxy,
    mean_spread,
    simple_rolling_average,
    spliced_libor,
)
from creditindex.series import IndexSeries, RateSeries, SeriesKind


def _rates(values, index, kind=SeriesKind.OVERNIGHT, name="SOFR") -> RateSeries:
    return RateSeries(name=name, values=pd.Series(values, index=index), kind=kind)


def _daily(value: float, days: int = 30, start: str = "2023-01-01") -> RateSeries:
    idx = pd.date_range(start, periods=days, freq="D")
    return _rates([value] * days, idx)


# -----------------------------
# Compounding
# -----------------------------
def test_compounded_average_constant_rate_closed_form() -> None:
    out = compounded_average(_daily(3.6))
    assert len(out) == 1
    expected = ((1 + 0.036 / 360) ** 30 - 1) * 12 * 100
    assert out.values.iloc[0] == pytest.approx(expected, abs=1e-12)
    assert out.values.iloc[0] == pytest.approx(3.6052, abs=1e-4)
    assert out.kind is SeriesKind.AVERAGE_30D_COMPOUND


def test_compounded_average_zero_and_single_day() -> None:
    assert compounded_average(_daily(0.0)).values.iloc[0] == 0.0
    single = compounded_average(_daily(2.5, days=3), window=1)
    assert np.allclose(single.values.to_numpy(), 2.5)


def test_compounded_average_friday_rate_covers_weekend() -> None:
    idx = pd.bdate_range("2023-01-02", "2023-03-31")
    rates = _rates(np.linspace(1.0, 5.0, len(idx)), idx)
    out = compounded_average(rates, 30, calendar=BusinessCalendar())
    last = out.values.index[-1]
    obs = rates.values.loc[last - pd.Timedelta(days=29) : last]
    ends = list(obs.index[1:]) + [last + pd.Timedelta(days=1)]
    n = np.array([(e - s).days for s, e in zip(obs.index, ends)])
    assert n.max() == 3
    growth = np.prod(1 + obs.to_numpy() / 100.0 * n / 360)
    expected = (growth - 1) * 360 / 30 * 100
    assert out.values.iloc[-1] == pytest.approx(expected, abs=1e-12)


def test_compounded_average_not_below_arithmetic_mean() -> None:
    rng = np.random.default_rng(1)
    rates = _rates(rng.uniform(0, 6, 90), pd.date_range("2023-01-01", periods=90))
    out = compounded_average(rates)
    simple = rates.values.rolling(30).mean().dropna()
    assert (out.values.to_numpy() >= simple.to_numpy() - 1e-12).all()


def test_compounded_average_detects_missing_business_day() -> None:
    idx = pd.bdate_range("2023-01-02", "2023-02-28").delete(10)
    with pytest.raises(MissingDataError) as err:
        compounded_average(_rates([4.0] * len(idx), idx), calendar=BusinessCalendar())
    assert err.value.first_missing == date(2023, 1, 16)


def test_compounded_average_detects_long_gap_without_calendar() -> None:
    idx = pd.DatetimeIndex(["2023-01-02", "2023-01-03", "2023-01-10"])
    with pytest.raises(MissingDataError):
        compounded_average(_rates([4.0] * 3, idx), max_gap_days=4)


# -----------------------------
# Simple averages and the averaging gap
# -----------------------------
def test_simple_rolling_average_ramp() -> None:
    idx = pd.bdate_range("2023-01-02", periods=21)
    out = simple_rolling_average(IndexSeries("x", pd.Series(np.arange(1.0, 22.0), idx)))
    assert out.values.tolist() == [pytest.approx(11.0)]
    assert out.kind is SeriesKind.AVERAGE_21BD_SIMPLE


def test_averaging_gap_for_constant_spread() -> None:
    idx = pd.bdate_range("2023-01-02", "2023-04-28")
    r = 0.6
    gap = averaging_method_gap(IndexSeries("AXI daily", pd.Series(r, index=idx)))
    expected = r - ((1 + r / 100 / 360) ** 30 - 1) * 12 * 100
    assert len(gap) > 0
    # weekend rates accrue as simple interest, so the daily-compounding form is close
    assert np.allclose(gap.values.to_numpy(), expected, atol=1e-5)
    assert gap.values.abs().max() < 0.01


def test_averaging_gap_zero_spreads() -> None:
    idx = pd.bdate_range("2023-01-02", "2023-03-31")
    gap = averaging_method_gap(IndexSeries("z", pd.Series(0.0, index=idx)))
    assert (gap.values == 0.0).all()


# -----------------------------
# Composite rates and calibration
# -----------------------------
def _pair():
    idx = pd.bdate_range("2023-01-02", periods=5)
    sofr = _rates([5.0] * 5, idx, kind=SeriesKind.AVERAGE_30D_COMPOUND)
    axi = IndexSeries("AXI", pd.Series([0.6, 0.5, 0.7, 0.6, 0.4], index=idx))
    return sofr, axi


def test_credit_sensitive_rate_examples() -> None:
    sofr, axi = _pair()
    zero = credit_sensitive_rate(CompositeRateSpec(sofr, 1.0, 0.0), axi)
    assert np.allclose(zero.values.to_numpy(), 6.0)
    full = credit_sensitive_rate(CompositeRateSpec(sofr, 1.0, 1.0), axi)
    assert full.values.iloc[0] == pytest.approx(6.6)


def test_credit_sensitive_rate_nondecreasing_in_sensitivity() -> None:
    sofr, axi = _pair()
    levels = [
        credit_sensitive_rate(CompositeRateSpec(sofr, 0.5, c), axi).values.to_numpy()
        for c in np.linspace(0, 1, 11)
    ]
    assert all((b >= a).all() for a, b in zip(levels, levels[1:]))


def test_credit_sensitive_rate_requires_shared_dates() -> None:
    sofr, _ = _pair()
    later = IndexSeries("AXI", pd.Series([0.5], index=pd.DatetimeIndex(["2024-01-02"])))
    with pytest.raises(AlignmentError):
        credit_sensitive_rate(CompositeRateSpec(sofr, 0.0, 1.0), later)


def test_composite_spec_validates_sensitivity() -> None:
    sofr, _ = _pair()
    with pytest.raises(ValueError):
        CompositeRateSpec(sofr, 0.0, 1.5)


def test_calibrate_equivalent_spread_identity() -> None:
    sofr, axi = _pair()
    target = credit_sensitive_rate(CompositeRateSpec(sofr, 1.0, 1.0), axi)
    assert calibrate_equivalent_spread(sofr, sofr) == 0.0
    spread = calibrate_equivalent_spread(target, sofr)
    assert float((sofr.values + spread).mean()) == pytest.approx(
        float(target.values.mean()), abs=1e-12
    )
    assert mean_spread(target, sofr) == pytest.approx(spread)


# -----------------------------
# LIBOR proxy
# -----------------------------
def test_libor_proxy_adds_fixed_spread() -> None:
    days = pd.bdate_range("2023-07-03", periods=2)
    term = _rates([5.0, 5.2], days, kind=SeriesKind.COMPOSITE)
    assert libor_proxy(term).values.iloc[0] == pytest.approx(5.1148)
    assert libor_proxy(term, 0.0).values.tolist() == term.values.tolist()
    twice = libor_proxy(libor_proxy(term, 5.0), 6.48)
    once = libor_proxy(term, 11.48)
    assert np.allclose(twice.values.to_numpy(), once.values.to_numpy())


def test_spliced_libor_switches_after_cutover() -> None:
    idx = pd.bdate_range("2023-06-28", periods=5)
    libor = _rates([5.5] * 5, idx, kind=SeriesKind.LIBOR, name="LIBOR 1M")
    term = _rates([5.0] * 5, idx, kind=SeriesKind.COMPOSITE)
    out = spliced_libor(libor, term, date(2023, 6, 30))
    assert out.values.loc["2023-06-30"] == 5.5
    assert out.values.loc["2023-07-03"] == pytest.approx(5.1148)
    assert out.kind is SeriesKind.LIBOR
