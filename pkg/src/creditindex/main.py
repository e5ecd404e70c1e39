from __future__ import annotations

import logging
from dataclasses import asdict
from datetime import date
from pathlib import Path
from typing import Mapping, Optional

import pandas as pd

from creditindex.config import Config, cfg
from creditindex.data_io import (
    parse_decompositions,
    parse_series,
    parse_transactions,
    write_decompositions,
    write_series,
    write_transactions,
)
from creditindex.errors import NoDataError
from creditindex.generate.synthetic import (
    GENERATOR_VERSION,
    StressWindow,
    SyntheticConfig,
    generate_indicator,
    generate_overnight_rates,
    generate_synthetic,
)
from creditindex.index import (
    IndexBuild,
    build_index,
    normalize_to,
    publish_with_fallback,
    spread_summary,
    volume_summary,
)
from creditindex.loans import (
    cumulative_profit,
    fixed_spread_loan,
    horizon_days,
    income_equivalent_loan,
    stress_report,
    stress_table,
)
from creditindex.precheck import precheck_transactions
from creditindex.rates import (
    CompositeRateSpec,
    averaging_method_gap,
    compounded_average,
    credit_sensitive_rate,
    mean_spread,
    spliced_libor,
)
from creditindex.reporting import (
    IndexRunSummary,
    ReportFormat,
    RiskSummary,
    emit_report,
    render_correlation_table,
    render_index_summary,
    render_risk_summary,
)
from creditindex.risk import (
    PricingPolicy,
    RarParams,
    demand_impact,
    discount_curve,
    equivalent_spread,
    estimate_rar_params,
    risk_adjusted_return,
)
from creditindex.series import RateSeries, SeriesKind, inner_join
from creditindex.stats import (
    TransformKind,
    TransformSpec,
    correlation_table,
    granger_table,
    read_manifest,
    transform,
)
from creditindex.transactions import IndexScope

logger = logging.getLogger(__name__)

Outputs = dict[str, Path]


# ----------------------------
# synth
# ----------------------------
def default_scenario(seed: Optional[int] = 7) -> SyntheticConfig:
    """Calm span with two stress episodes, long enough for every loan horizon."""
    return SyntheticConfig(
        seed=seed,
        start=date(2019, 7, 1),
        end=date(2024, 6, 28),
        stress_windows=(
            StressWindow(date(2020, 3, 2), date(2020, 5, 29), 8.0, 0.5, 1.0),
            StressWindow(date(2023, 3, 8), date(2023, 4, 28), 3.0, 0.7, 1.0),
        ),
    )


def run_synth(
    synth_cfg: SyntheticConfig, out_dir: Path, config: Config | None = None
) -> Outputs:
    """
    Write a seeded transaction pool plus the overnight rate and a stress
    indicator driven by the pool's bank daily spreads.
    """
    cfg_obj = config or cfg
    out_dir.mkdir(parents=True, exist_ok=True)
    stamp = {"generator": GENERATOR_VERSION, "seed": str(synth_cfg.seed)}

    transactions = generate_synthetic(synth_cfg)
    outputs: Outputs = {
        "transactions": write_transactions(
            out_dir / "transactions.csv", transactions, stamp
        )
    }
    overnight = generate_overnight_rates(synth_cfg)
    outputs["overnight"] = write_series(
        out_dir / "sofr_overnight.csv", overnight, stamp
    )

    driver = build_index(transactions, IndexScope.AXI, cfg_obj).daily
    indicator = generate_indicator(synth_cfg, driver)
    outputs["indicator"] = write_series(out_dir / "indicator.csv", indicator, stamp)

    manifest = out_dir / "indicators_manifest.csv"
    row = {
        "name": indicator.name,
        "path": "indicator.csv",
        "transform": TransformKind.DIFFERENCE.value,
        "frequency": "weekly",
    }
    pd.DataFrame([row]).to_csv(manifest, index=False, lineterminator="\n")
    outputs["manifest"] = manifest
    logger.info(
        "synth: %d transactions over %d business days", len(transactions), len(driver)
    )
    return outputs


# ----------------------------
# index
# ----------------------------
def summarize_build(build: IndexBuild) -> IndexRunSummary:
    values = build.index.values
    published = build.index.dates
    lt_fraction = build.lt_fraction.values
    maturities = pd.Series(
        [d.weighted_avg_maturity for d in build.decompositions], dtype=float
    )
    return IndexRunSummary(
        scope=build.scope.value,
        n_dates=len(build.decompositions),
        n_published=len(values),
        first_published=published[0] if published else None,
        last_published=published[-1] if published else None,
        mean_index=float(values.mean()),
        mean_lt_fraction=float(lt_fraction.mean()),
        mean_weighted_maturity=float(maturities.mean()),
    )


def run_index_compute(
    transactions_path: Path,
    scope: IndexScope | str,
    out_dir: Path,
    config: Config | None = None,
    fmt: ReportFormat = "csv",
    *,
    precheck: bool = True,
) -> tuple[IndexBuild, Outputs]:
    """
    Compute AXI or FXI from a transaction CSV.

    Writes the published index, the daily spreads, the LT weight fraction and the
    per-date decompositions as series CSVs, plus spread and volume summary tables
    in `fmt`.
    """
    cfg_obj = config or cfg
    scope = IndexScope(scope)
    transactions = parse_transactions(transactions_path)
    if precheck:
        precheck_transactions(
            transactions, scope, cfg_obj.calendar, window=cfg_obj.WINDOW_BUSINESS_DAYS
        )
    build = build_index(transactions, scope, cfg_obj)
    name = scope.value
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs: Outputs = {
        "index": write_series(out_dir / f"{name}.csv", build.index),
        "daily": write_series(out_dir / f"{name}_daily.csv", build.daily),
        "lt_weight": write_series(out_dir / f"{name}_lt_weight.csv", build.lt_fraction),
        "decompositions": write_decompositions(
            out_dir / f"{name}_decompositions.csv", build.decompositions
        ),
    }
    summary = summarize_build(build)
    render_index_summary(summary)
    if build.decompositions and len(build.index):
        table = spread_summary(build.decompositions, build.index).reset_index()
    else:
        table = pd.DataFrame(columns=["statistic"])
    outputs["summary"] = emit_report(table, f"{name}_summary", out_dir, fmt).path
    if build.decompositions:
        volume = volume_summary(build.decompositions)
    else:
        volume = pd.DataFrame(columns=["statistic", "value", "date"])
    outputs["volume"] = emit_report(volume, f"{name}_volume", out_dir, fmt).path
    return build, outputs


def run_index_fallback(
    transactions_path: Path,
    out_dir: Path,
    config: Config | None = None,
    fmt: ReportFormat = "csv",
) -> tuple[pd.DataFrame, Outputs]:
    """Publish AXI with FXI substituted on dates of thin AXI volume."""
    cfg_obj = config or cfg
    transactions = parse_transactions(transactions_path)
    axi = build_index(transactions, IndexScope.AXI, cfg_obj).index
    fxi = build_index(transactions, IndexScope.FXI, cfg_obj).index
    published = publish_with_fallback(
        axi, fxi, cfg_obj.FALLBACK_VOLUME_FRACTION, cfg_obj.WINDOW_BUSINESS_DAYS
    )
    n_fallback = int((published["source"] == "fallback").sum()) if len(published) else 0
    if n_fallback:
        logger.warning(
            "fallback to FXI on %d of %d date(s)", n_fallback, len(published)
        )
    artifact = emit_report(published, "axi_with_fallback", out_dir, fmt)
    return published, {"published": artifact.path}


# ----------------------------
# rates
# ----------------------------
def _thirty_day(series: RateSeries, cfg_obj: Config) -> RateSeries:
    if series.kind is SeriesKind.OVERNIGHT:
        return compounded_average(
            series,
            cfg_obj.COMPOUND_WINDOW_DAYS,
            calendar=cfg_obj.calendar,
            max_gap_days=cfg_obj.MAX_RATE_GAP_DAYS,
            day_count=cfg_obj.DAY_COUNT_BASE,
        )
    return series


def run_rates(
    overnight_path: Path,
    axi_path: Path,
    out_dir: Path,
    config: Config | None = None,
    fmt: ReportFormat = "csv",
    *,
    fixed_spread: float = 0.0,
    daily_spreads_path: Optional[Path] = None,
    libor_path: Optional[Path] = None,
    term_sofr_path: Optional[Path] = None,
) -> Outputs:
    """
    Build the 30-day compounded reference rate and the credit-sensitive composite
    reference + fixed_spread + c * AXI with c = CREDIT_SENSITIVITY. AXI is also
    written rebased to the reference level on their first common date.

    Optional inputs add the simple-versus-compound averaging gap (daily spreads),
    the LIBOR comparison and the spliced LIBOR series (term SOFR).
    """
    cfg_obj = config or cfg
    out_dir.mkdir(parents=True, exist_ok=True)
    reference = _thirty_day(parse_series(overnight_path), cfg_obj)
    axi = parse_series(axi_path)
    composite = credit_sensitive_rate(
        CompositeRateSpec(reference, fixed_spread, cfg_obj.CREDIT_SENSITIVITY), axi
    )
    outputs: Outputs = {
        "reference": write_series(out_dir / "sofr_30d_compound.csv", reference),
        "composite": write_series(out_dir / "composite.csv", composite),
    }
    joined = inner_join(reference, axi)
    try:
        rebased = axi.with_values(
            normalize_to(joined["1"], joined["0"]), name=f"{axi.name} (rebased)"
        )
        outputs["rebased"] = write_series(out_dir / "axi_rebased.csv", rebased)
    except NoDataError as exc:
        logger.warning("AXI not rebased: %s", exc)

    stats: list[dict[str, object]] = [
        {"statistic": "mean reference", "value_pct": float(reference.values.mean())},
        {"statistic": "mean composite", "value_pct": float(composite.values.mean())},
    ]
    if daily_spreads_path is not None:
        gap = averaging_method_gap(
            parse_series(daily_spreads_path),
            simple_window=cfg_obj.WINDOW_BUSINESS_DAYS,
            compound_window=cfg_obj.COMPOUND_WINDOW_DAYS,
            max_gap_days=cfg_obj.MAX_RATE_GAP_DAYS,
        )
        outputs["averaging_gap"] = write_series(out_dir / "averaging_gap.csv", gap)
        stats.append(
            {
                "statistic": "max |simple - compound|",
                "value_pct": float(gap.values.abs().max()),
            }
        )
    if libor_path is not None:
        libor = parse_series(libor_path)
        if term_sofr_path is not None:
            libor = spliced_libor(
                libor,
                parse_series(term_sofr_path),
                cfg_obj.LIBOR_CUTOVER,
                cfg_obj.LIBOR_FALLBACK_SPREAD_BP,
            )
            outputs["libor"] = write_series(out_dir / "libor_spliced.csv", libor)
        stats.append(
            {
                "statistic": "mean composite - LIBOR",
                "value_pct": mean_spread(composite, libor),
            }
        )

    summary = emit_report(pd.DataFrame(stats), "rates_summary", out_dir, fmt)
    outputs["summary"] = summary.path
    return outputs


# ----------------------------
# loan
# ----------------------------
def run_loan(
    reference_path: Path,
    axi_path: Path,
    out_dir: Path,
    config: Config | None = None,
    fmt: ReportFormat = "csv",
    *,
    libor_path: Optional[Path] = None,
    anchors: Optional[Mapping[str, date]] = None,
) -> tuple[pd.DataFrame, Outputs]:
    """
    Compare loan pricing schemes against the true funding cost SOFR + AXI.

    The credit-sensitive loan charges funding + LOAN_SPREAD_PCT; the SOFR-only (and,
    when given, LIBOR) loans get the spread that earns the same average rate.
    """
    cfg_obj = config or cfg
    out_dir.mkdir(parents=True, exist_ok=True)
    reference = _thirty_day(parse_series(reference_path), cfg_obj)
    axi = parse_series(axi_path)
    funding = credit_sensitive_rate(CompositeRateSpec(reference, 0.0, 1.0), axi)
    funding = funding.with_values(funding.values, name=f"{reference.name}+AXI")
    target = fixed_spread_loan(
        f"{reference.name}+AXI", funding, cfg_obj.LOAN_SPREAD_PCT, cfg_obj.NOTIONAL
    )
    schemes = [
        target,
        income_equivalent_loan(
            reference.name,
            reference,
            funding,
            cfg_obj.NOTIONAL,
            cfg_obj.LOAN_SPREAD_PCT,
        ),
    ]
    if libor_path is not None:
        libor = parse_series(libor_path)
        schemes.append(
            income_equivalent_loan(
                libor.name, libor, funding, cfg_obj.NOTIONAL, cfg_obj.LOAN_SPREAD_PCT
            )
        )

    periods = dict(anchors or cfg_obj.STRESS_ANCHORS)
    report = stress_report(
        schemes,
        funding,
        periods,
        cfg_obj.HORIZON_MONTHS,
        max_gap_days=cfg_obj.MAX_RATE_GAP_DAYS,
    )
    outputs: Outputs = {
        "stress_report": emit_report(report, "stress_report", out_dir, fmt).path,
        "stress_table": emit_report(
            stress_table(report),
            "stress_table",
            out_dir,
            fmt,
            title="Extra profit (bp, annualized)",
            echo=True,
        ).path,
    }

    longest = max(cfg_obj.HORIZON_MONTHS)
    for period, anchor in periods.items():
        days = horizon_days(anchor, longest)
        paths = {
            loan.name: cumulative_profit(
                loan, funding, anchor, days, max_gap_days=cfg_obj.MAX_RATE_GAP_DAYS
            ).cumulative
            for loan in schemes
        }
        frame = pd.DataFrame(paths)
        frame.insert(0, "date", [ts.date().isoformat() for ts in frame.index])
        slug = "".join(ch if ch.isalnum() else "_" for ch in period.lower()).strip("_")
        outputs[f"profit_{slug}"] = emit_report(
            frame.reset_index(drop=True), f"profit_paths_{slug}", out_dir, "csv"
        ).path
    return report, outputs


# ----------------------------
# risk
# ----------------------------
def run_risk(
    out_dir: Path,
    config: Config | None = None,
    fmt: ReportFormat = "csv",
    *,
    spread: Optional[float] = None,
    index_path: Optional[Path] = None,
    decompositions_path: Optional[Path] = None,
    params: Optional[RarParams] = None,
) -> tuple[RiskSummary, Outputs]:
    """
    Spread discount curve over c in [0, 1] and the headline discount at
    CREDIT_SENSITIVITY. Parameters come from `params`, else are estimated from an
    index and its decompositions, else the long-run defaults are used.
    """
    cfg_obj = config or cfg
    s = cfg_obj.LOAN_SPREAD_PCT if spread is None else spread
    if params is None and index_path is not None and decompositions_path is not None:
        params = estimate_rar_params(
            parse_series(index_path),
            parse_decompositions(decompositions_path),
            cfg_obj.SIGMA_DELTA_MODE,
        )
        logger.info("estimated risk parameters: %s", params)
    params = params or RarParams()

    c = cfg_obj.CREDIT_SENSITIVITY
    prime = equivalent_spread(s, c, params)
    discount = s - prime
    summary = RiskSummary(
        spread_pct=s,
        sensitivity=c,
        equivalent_spread_pct=prime,
        discount_bp=discount * 100.0,
        demand_impact_pct=demand_impact(discount, cfg_obj.ELASTICITY),
        rar_reference_only=risk_adjusted_return(PricingPolicy(s, 0.0), params),
        rar_credit_sensitive=risk_adjusted_return(PricingPolicy(s, c), params),
    )
    render_risk_summary(summary)
    out_dir.mkdir(parents=True, exist_ok=True)
    outputs: Outputs = {
        "discount_curve": emit_report(
            discount_curve(s, params), "discount_curve", out_dir, "csv"
        ).path,
        "params": emit_report(
            pd.DataFrame([asdict(params)]), "risk_params", out_dir, fmt
        ).path,
        "summary": emit_report(
            pd.DataFrame([asdict(summary)]), "risk_summary", out_dir, fmt
        ).path,
    }
    return summary, outputs


# ----------------------------
# stats
# ----------------------------
def run_stats(
    target_path: Path,
    manifest_path: Path,
    out_dir: Path,
    config: Config | None = None,
    fmt: ReportFormat = "csv",
    *,
    target_spec: Optional[TransformSpec] = None,
) -> Outputs:
    """
    Lagged correlations and two-way Granger tests of a target series against
    every indicator listed in a manifest. Each indicator is transformed as its
    manifest entry says; the target uses `target_spec` (default: differences at
    the first indicator's frequency).
    """
    cfg_obj = config or cfg
    entries = read_manifest(manifest_path)
    if not entries:
        raise NoDataError(f"{manifest_path}: manifest lists no indicators")
    target_series = parse_series(target_path)
    first = next(iter(entries.values()))
    spec = target_spec or TransformSpec(TransformKind.DIFFERENCE, first.spec.frequency)
    target = transform(target_series, spec)

    indicators: dict[str, pd.Series] = {}
    for name, entry in entries.items():
        if entry.spec.frequency is not spec.frequency:
            logger.warning(
                "%s: frequency %s differs from target %s",
                name,
                entry.spec.frequency.value,
                spec.frequency.value,
            )
        indicators[name] = transform(parse_series(entry.path, name=name), entry.spec)

    workers = cfg_obj.NUM_PARALLEL_WORKERS
    correlations = correlation_table(
        target, indicators, cfg_obj.CORRELATION_LAGS, workers=workers
    )
    render_correlation_table(correlations, f"Correlations with {target_series.name}")
    granger = granger_table(
        target,
        indicators,
        cfg_obj.GRANGER_MAX_LAG,
        target_name=target_series.name,
        levels=cfg_obj.SIGNIFICANCE_LEVELS,
        workers=workers,
    )
    out_dir.mkdir(parents=True, exist_ok=True)
    return {
        "correlations": emit_report(correlations, "correlations", out_dir, fmt).path,
        "granger": emit_report(granger, "granger", out_dir, fmt).path,
    }
