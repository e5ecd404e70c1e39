from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, Mapping, Sequence

import numpy as np
import pandas as pd
import statsmodels.api as sm
from scipy import stats as sps

from creditindex.errors import (
    CreditIndexError,
    NoDataError,
    SchemaError,
    SingularDesignError,
    UndefinedCorrelationError,
)
from creditindex.series import IndexSeries

logger = logging.getLogger(__name__)


class TransformKind(str, Enum):
    DIFFERENCE = "difference"
    LOG_DIFFERENCE = "log_difference"
    NONE = "none"


class Frequency(str, Enum):
    DAILY = "daily"
    WEEKLY = "weekly"
    MONTHLY = "monthly"
    QUARTERLY = "quarterly"


# Period-end resampling rules; weeks run Monday to Sunday.
_RULES = {Frequency.WEEKLY: "W-SUN", Frequency.MONTHLY: "ME", Frequency.QUARTERLY: "QE"}


@dataclass(frozen=True)
class TransformSpec:
    kind: TransformKind = TransformKind.DIFFERENCE
    frequency: Frequency = Frequency.DAILY

    def __post_init__(self) -> None:
        object.__setattr__(self, "kind", TransformKind(self.kind))
        object.__setattr__(self, "frequency", Frequency(self.frequency))


@dataclass(frozen=True)
class CorrelationResult:
    lag: int
    correlation: float
    p_value: float
    n: int

    def significant(self, level: float = 0.05) -> bool:
        return self.p_value < level


@dataclass(frozen=True)
class GrangerResult:
    """F-test of whether lags of `cause` improve an autoregression of `effect`."""

    cause: str
    effect: str
    lag: int
    f_statistic: float
    p_value: float
    df_num: int
    df_denom: int
    n: int

    @property
    def direction(self) -> str:
        return f"{self.cause} -> {self.effect}"


def _as_series(values: IndexSeries | pd.Series) -> pd.Series:
    if isinstance(values, IndexSeries):
        return values.values
    return values.sort_index().astype(float)


def _changes(values: pd.Series, kind: TransformKind) -> pd.Series:
    if kind is TransformKind.NONE:
        return values.copy()
    if kind is TransformKind.LOG_DIFFERENCE:
        if (values <= 0).any():
            raise CreditIndexError("log_difference needs strictly positive values")
        return np.log(values).diff().dropna()
    return values.diff().dropna()


def transform(series: IndexSeries | pd.Series, spec: TransformSpec) -> pd.Series:
    """
    Difference or log-difference a series at the requested frequency.

    Weekly and monthly values are the mean of the daily changes inside each
    period. Quarterly values difference the last level of each quarter. With
    kind "none" levels are averaged (weekly, monthly) or sampled at quarter end.
    """
    values = _as_series(series)
    needed = 1 if spec.kind is TransformKind.NONE else 2
    if len(values) < needed:
        raise NoDataError(f"transform needs at least {needed} observations")

    if spec.frequency is Frequency.DAILY:
        out = _changes(values, spec.kind)
    elif spec.frequency is Frequency.QUARTERLY:
        levels = values.resample(_RULES[spec.frequency]).last().dropna()
        out = _changes(levels, spec.kind)
    else:
        changes = _changes(values, spec.kind)
        out = changes.resample(_RULES[spec.frequency]).mean().dropna()
    out.name = getattr(series, "name", None)
    return out


def _align(x: pd.Series, y: pd.Series) -> tuple[np.ndarray, np.ndarray]:
    frame = pd.concat([x.rename("x"), y.rename("y")], axis=1, join="inner").dropna()
    return frame["x"].to_numpy(dtype=float), frame["y"].to_numpy(dtype=float)


def _pearson(a: np.ndarray, b: np.ndarray, lag: int) -> CorrelationResult:
    n = a.size
    if n < 3:
        raise UndefinedCorrelationError(f"lag {lag}: {n} observations, need at least 3")
    if np.std(a) == 0 or np.std(b) == 0:
        raise UndefinedCorrelationError(f"lag {lag}: a series has zero variance")
    r = float(np.clip(np.corrcoef(a, b)[0, 1], -1.0, 1.0))
    if r * r >= 1.0:
        return CorrelationResult(lag=lag, correlation=r, p_value=0.0, n=n)
    t_stat = r * np.sqrt((n - 2) / (1.0 - r * r))
    p_value = float(2.0 * sps.t.sf(abs(t_stat), df=n - 2))
    return CorrelationResult(lag=lag, correlation=r, p_value=p_value, n=n)


def lagged_correlation(
    x: IndexSeries | pd.Series,
    y: IndexSeries | pd.Series,
    lags: int | Iterable[int] = 3,
) -> list[CorrelationResult]:
    """
    Pearson correlation of x_t with y_(t-lag) on the shared dates, with a
    two-sided t-test p-value on n - 2 degrees of freedom.

    An integer `lags` means lags 0 through `lags`.
    """
    xs, ys = _align(_as_series(x), _as_series(y))
    lag_list = range(lags + 1) if isinstance(lags, int) else list(lags)
    results = []
    for lag in lag_list:
        if lag < 0:
            raise ValueError("lags must be non-negative")
        a = xs[lag:]
        b = ys[: ys.size - lag]
        results.append(_pearson(a, b, lag))
    return results


def regression_slope_pvalue(
    x: IndexSeries | pd.Series, y: IndexSeries | pd.Series
) -> float:
    """Two-sided p-value of the slope in the OLS regression y = a + b x."""
    xs, ys = _align(_as_series(x), _as_series(y))
    if xs.size < 3 or np.std(xs) == 0:
        raise UndefinedCorrelationError(
            "regression needs 3+ points and a varying regressor"
        )
    fit = sm.OLS(ys, sm.add_constant(xs, has_constant="add")).fit()
    return float(fit.pvalues[1])


def _lag_matrix(values: np.ndarray, max_lag: int) -> np.ndarray:
    n = values.size
    return np.column_stack([values[max_lag - k : n - k] for k in range(1, max_lag + 1)])


def granger_test(
    x: IndexSeries | pd.Series,
    y: IndexSeries | pd.Series,
    max_lag: int = 4,
    *,
    cause: str = "x",
    effect: str = "y",
) -> GrangerResult:
    """
    Does x Granger-cause y?

    Compares an AR(max_lag) of y with the model augmented by max_lag lags of x
    using the nested-model F-test. Inputs are expected to be stationary already.
    """
    if max_lag < 1:
        raise ValueError("max_lag must be >= 1")
    xs, ys = _align(_as_series(x), _as_series(y))
    n_obs = xs.size
    if n_obs <= 2 * max_lag + 1:
        raise NoDataError(
            f"granger_test with lag {max_lag} needs more than "
            f"{2 * max_lag + 1} observations"
        )

    target = ys[max_lag:]
    const = np.ones((target.size, 1))
    restricted = np.hstack([const, _lag_matrix(ys, max_lag)])
    unrestricted = np.hstack([restricted, _lag_matrix(xs, max_lag)])
    if np.linalg.matrix_rank(unrestricted) < unrestricted.shape[1]:
        raise SingularDesignError(
            f"{cause} -> {effect}: design matrix is rank deficient (collinear lags)"
        )

    fit_r = sm.OLS(target, restricted).fit()
    fit_u = sm.OLS(target, unrestricted).fit()
    f_stat, p_value, df_diff = fit_u.compare_f_test(fit_r)
    return GrangerResult(
        cause=cause,
        effect=effect,
        lag=max_lag,
        f_statistic=float(f_stat),
        p_value=float(p_value),
        df_num=int(df_diff),
        df_denom=int(fit_u.df_resid),
        n=int(target.size),
    )


def correlation_table(
    target: IndexSeries | pd.Series,
    indicators: Mapping[str, IndexSeries | pd.Series],
    lags: int = 3,
    *,
    workers: int = 1,
) -> pd.DataFrame:
    """
    One correlation row and one p-value row per indicator, with columns
    `current` and `lag 1` .. `lag N` (the indicator leads the target).
    """
    columns = ["variable", "stat", "current"] + [f"lag {k}" for k in range(1, lags + 1)]

    def _one(item: tuple[str, IndexSeries | pd.Series]) -> list[dict]:
        name, series = item
        results = lagged_correlation(target, series, lags)
        return [
            {"variable": name, "stat": "correl.", **_by_lag(results, "correlation")},
            {"variable": name, "stat": "p-value", **_by_lag(results, "p_value")},
        ]

    rows = _map(_one, list(indicators.items()), workers)
    return pd.DataFrame([r for pair in rows for r in pair], columns=columns)


def _by_lag(results: Sequence[CorrelationResult], field: str) -> dict[str, float]:
    return {
        ("current" if r.lag == 0 else f"lag {r.lag}"): getattr(r, field)
        for r in results
    }


def granger_table(
    target: IndexSeries | pd.Series,
    indicators: Mapping[str, IndexSeries | pd.Series],
    max_lag: int = 4,
    *,
    target_name: str = "target",
    levels: Sequence[float] = (0.05, 0.10),
    workers: int = 1,
) -> pd.DataFrame:
    """Granger tests in both directions for every indicator, one row per direction."""
    flag_columns = [f"p<{level:g}" for level in levels]
    columns = ["cause", "effect", "lag", "f_stat", "p_value", "df_num", "df_denom", "n"]

    def _one(item: tuple[str, IndexSeries | pd.Series]) -> list[dict]:
        name, series = item
        rows = []
        for result in (
            granger_test(series, target, max_lag, cause=name, effect=target_name),
            granger_test(target, series, max_lag, cause=target_name, effect=name),
        ):
            row = {
                "cause": result.cause,
                "effect": result.effect,
                "lag": result.lag,
                "f_stat": result.f_statistic,
                "p_value": result.p_value,
                "df_num": result.df_num,
                "df_denom": result.df_denom,
                "n": result.n,
            }
            row.update(
                {c: result.p_value < lvl for c, lvl in zip(flag_columns, levels)}
            )
            rows.append(row)
        return rows

    rows = _map(_one, list(indicators.items()), workers)
    flat = [r for pair in rows for r in pair]
    return pd.DataFrame(flat, columns=columns + flag_columns)


def _map(fn, items: list, workers: int) -> list:
    if workers > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, items))
    return [fn(item) for item in items]


@dataclass(frozen=True)
class ManifestEntry:
    name: str
    path: Path
    spec: TransformSpec


MANIFEST_COLUMNS = ("name", "path", "transform")


def read_manifest(path: Path | str) -> dict[str, ManifestEntry]:
    """
    Read an indicator manifest CSV with columns name, path, transform and an
    optional frequency. Relative paths resolve against the manifest's folder.
    """
    path = Path(path)
    frame = pd.read_csv(path, comment="#", dtype=str, skipinitialspace=True).fillna("")
    missing = [c for c in MANIFEST_COLUMNS if c not in frame.columns]
    if missing:
        raise SchemaError(f"{path}: manifest is missing column(s) {', '.join(missing)}")

    entries: dict[str, ManifestEntry] = {}
    for i, row in enumerate(frame.itertuples(index=False), start=2):
        name = str(row.name).strip()
        if name in entries:
            raise SchemaError(f"{path}: line {i}: duplicate indicator '{name}'")
        try:
            spec = TransformSpec(
                kind=str(row.transform).strip(),
                frequency=str(getattr(row, "frequency", "daily") or "daily").strip(),
            )
        except ValueError as exc:
            raise SchemaError(f"{path}: line {i}: {exc}") from exc
        target = Path(str(row.path).strip())
        if not target.is_absolute():
            target = path.parent / target
        entries[name] = ManifestEntry(name=name, path=target, spec=spec)
    logger.debug("manifest %s: %d indicator(s)", path, len(entries))
    return entries
