from __future__ import annotations

from datetime import date, datetime

import pytest

from creditindex.errors import IneligibleTransactionError
from creditindex.transactions import (
    LT_BUCKETS,
    IndexScope,
    MaturityBucket,
    ScopeTag,
    Transaction,
    assign_bucket,
    is_eligible,
)


@pytest.mark.parametrize(
    "maturity, bucket",
    [
        (1 / 365, MaturityBucket.ST),
        (0.999, MaturityBucket.ST),
        (1.0, MaturityBucket.LT1),
        (2.5, MaturityBucket.LT2),
        (3.0, MaturityBucket.LT3),
        (4.0, MaturityBucket.LT4),
        (5.0, MaturityBucket.LT4),
    ],
)
def test_assign_bucket(maturity: float, bucket: MaturityBucket) -> None:
    assert assign_bucket(maturity) is bucket
    assert is_eligible(maturity)


@pytest.mark.parametrize("maturity", [0.0, -1.0, 5.0001, float("nan"), float("inf")])
def test_ineligible_maturity(maturity: float) -> None:
    assert not is_eligible(maturity)
    with pytest.raises(IneligibleTransactionError):
        assign_bucket(maturity)


def test_bucket_bounds() -> None:
    assert MaturityBucket.ST.bounds == (0.0, 1.0)
    assert MaturityBucket.LT4.bounds == (4.0, 5.0)
    assert [b.is_long_term for b in MaturityBucket] == [False, True, True, True, True]
    assert LT_BUCKETS == (
        MaturityBucket.LT1,
        MaturityBucket.LT2,
        MaturityBucket.LT3,
        MaturityBucket.LT4,
    )


def test_scope_admits() -> None:
    assert IndexScope.AXI.admits(ScopeTag.BANK)
    assert not IndexScope.AXI.admits(ScopeTag.NONBANK)
    assert IndexScope.FXI.admits(ScopeTag.BANK)
    assert IndexScope.FXI.admits(ScopeTag.NONBANK)


def test_transaction_normalizes_date_and_tag() -> None:
    t = Transaction(datetime(2023, 3, 1, 15, 30), 2.0, 10.0, 0.5, "nonbank")
    assert t.trade_date == date(2023, 3, 1)
    assert t.scope_tag is ScopeTag.NONBANK
    assert t.bucket is MaturityBucket.LT2
    assert t.eligible


def test_ineligible_transaction_can_be_held() -> None:
    t = Transaction(date(2023, 3, 1), 7.0, 10.0, 0.5)
    assert not t.eligible
    with pytest.raises(IneligibleTransactionError):
        _ = t.bucket


@pytest.mark.parametrize(
    "kwargs",
    [
        {"volume": -1.0},
        {"volume": float("nan")},
        {"spread": float("inf")},
        {"maturity": float("nan")},
    ],
)
def test_transaction_rejects_bad_numbers(kwargs: dict) -> None:
    base = {
        "trade_date": date(2023, 3, 1),
        "maturity": 1.0,
        "volume": 1.0,
        "spread": 0.1,
    }
    with pytest.raises(ValueError):
        Transaction(**{**base, **kwargs})


def test_transaction_rejects_string_date() -> None:
    with pytest.raises(TypeError):
        Transaction("2023-03-01", 1.0, 1.0, 0.1)


def test_scaled() -> None:
    t = Transaction(date(2023, 3, 1), 1.5, 100.0, 0.25, ScopeTag.NONBANK)
    s = t.scaled(volume_factor=3.0, spread_shift=0.1)
    assert s.volume == 300.0
    assert s.spread == pytest.approx(0.35)
    assert s.trade_date == t.trade_date
    assert s.maturity == t.maturity
    assert s.scope_tag is t.scope_tag
