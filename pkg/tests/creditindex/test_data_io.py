from __future__ import annotations

import logging
from datetime import date
from pathlib import Path

import pandas as pd
import pytest

from creditindex.data_io import (
    parse_decompositions,
    parse_series,
    parse_transactions,
    write_decompositions,
    write_series,
    write_transactions,
)
from creditindex.errors import SchemaError, ValidationError
from creditindex.generate.synthetic import SyntheticConfig, generate_synthetic
from creditindex.index import decompose_days
from creditindex.series import RateSeries, SeriesKind
from creditindex.transactions import IndexScope, ScopeTag, Transaction

HEADER = "trade_date,maturity_years,volume_usd,spread_pct,scope\n"


def _write(tmp_path: Path, text: str, name: str = "tx.csv") -> Path:
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


# -----------------------------
# Transactions
# -----------------------------
def test_parse_one_valid_row(tmp_path: Path) -> None:
    path = _write(tmp_path, HEADER + "2023-03-01,0.5,1000000,0.12,bank\n")
    assert parse_transactions(path) == [
        Transaction(date(2023, 3, 1), 0.5, 1_000_000.0, 0.12, ScopeTag.BANK)
    ]


def test_negative_volume_names_the_row(tmp_path: Path) -> None:
    path = _write(
        tmp_path,
        "# generator: test\n" + HEADER + "2023-03-01,0.5,10,0.1,bank\n"
        "2023-03-01,0.5,-5,0.1,bank\n",
    )
    with pytest.raises(ValidationError) as err:
        parse_transactions(path)
    assert err.value.line == 4
    assert err.value.column == "volume_usd"


@pytest.mark.parametrize(
    "row, column",
    [
        ("2023-13-01,0.5,10,0.1,bank", "trade_date"),
        ("2023-03-01,abc,10,0.1,bank", "maturity_years"),
        ("2023-03-01,0.5,10,0.1,insurer", "scope"),
    ],
)
def test_malformed_rows(tmp_path: Path, row: str, column: str) -> None:
    with pytest.raises(ValidationError) as err:
        parse_transactions(_write(tmp_path, HEADER + row + "\n"))
    assert err.value.column == column
    assert "line 2" in str(err.value)


def test_header_only_file_warns(
    tmp_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    with caplog.at_level(logging.WARNING, logger="creditindex.data_io"):
        assert parse_transactions(_write(tmp_path, HEADER)) == []
    assert "no transactions" in caplog.text


def test_missing_column_is_schema_error(tmp_path: Path) -> None:
    with pytest.raises(SchemaError, match="scope"):
        parse_transactions(
            _write(tmp_path, "trade_date,maturity_years,volume_usd,spread_pct\n")
        )


def test_rate_column_is_matched_against_curve(tmp_path: Path) -> None:
    path = _write(
        tmp_path,
        "trade_date,maturity_years,volume_usd,rate_pct,scope\n"
        "2023-03-01,1.5,10,5.3,bank\n",
    )
    [trade] = parse_transactions(path, curve=[(1.0, 4.0), (2.0, 5.0)])
    assert trade.spread == pytest.approx(0.8)
    with pytest.raises(ValidationError):
        parse_transactions(path)


def test_transactions_round_trip(tmp_path: Path, calm_synth: SyntheticConfig) -> None:
    pool = generate_synthetic(calm_synth)[:500]
    path = write_transactions(tmp_path / "pool.csv", pool, {"seed": "11"})
    assert path.read_text(encoding="utf-8").startswith("# seed: 11\n")
    assert parse_transactions(path) == pool


# -----------------------------
# Series
# -----------------------------
def test_parse_series_sorts_and_reads_header(tmp_path: Path) -> None:
    path = _write(
        tmp_path,
        "# kind: overnight\n# name: SOFR\n"
        "date,value_pct\n2023-01-03,5.31\n2023-01-02,5.30\n",
        "sofr.csv",
    )
    series = parse_series(path)
    assert series.kind is SeriesKind.OVERNIGHT
    assert series.name == "SOFR"
    assert series.dates == [date(2023, 1, 2), date(2023, 1, 3)]
    assert series.values.tolist() == [5.30, 5.31]


def test_parse_series_duplicate_date(tmp_path: Path) -> None:
    path = _write(
        tmp_path, "# kind: index\ndate,value_pct\n2023-01-02,1\n2023-01-02,2\n"
    )
    with pytest.raises(ValidationError, match="duplicate"):
        parse_series(path)


def test_parse_series_without_kind_defaults_to_composite(
    tmp_path: Path, caplog: pytest.LogCaptureFixture
) -> None:
    path = _write(tmp_path, "date,value_pct\n2023-01-02,1.0\n", "plain.csv")
    with caplog.at_level(logging.WARNING):
        series = parse_series(path)
    assert series.kind is SeriesKind.COMPOSITE
    assert series.name == "plain"
    assert "kind" in caplog.text


def test_parse_series_unknown_kind(tmp_path: Path) -> None:
    path = _write(tmp_path, "# kind: weather\ndate,value_pct\n2023-01-02,1.0\n")
    with pytest.raises(SchemaError):
        parse_series(path)


def test_series_round_trip(tmp_path: Path) -> None:
    idx = pd.bdate_range("2023-01-02", periods=5)
    series = RateSeries(
        name="LIBOR 1M",
        values=pd.Series([5.1, 5.2, 5.15, 5.3, 5.25], index=idx),
        kind=SeriesKind.LIBOR,
    )
    back = parse_series(write_series(tmp_path / "libor.csv", series))
    assert back.kind is SeriesKind.LIBOR
    assert back.name == "LIBOR 1M"
    pd.testing.assert_series_equal(back.values, series.values, check_freq=False)


# -----------------------------
# Decompositions
# -----------------------------
def test_decompositions_round_trip(tmp_path: Path, calm_synth: SyntheticConfig) -> None:
    decomps = decompose_days(generate_synthetic(calm_synth), IndexScope.AXI)[:5]
    back = parse_decompositions(write_decompositions(tmp_path / "d.csv", decomps))
    assert [d.date for d in back] == [d.date for d in decomps]
    for a, b in zip(back, decomps):
        assert a.daily_spread == pytest.approx(b.daily_spread, rel=1e-15)
        assert a.lt_weight == pytest.approx(b.lt_weight, rel=1e-15)
        assert a.lt_spread == pytest.approx(b.lt_spread, rel=1e-15)
