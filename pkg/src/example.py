"""
Module with example code for using the creditindex library.

There are three ways to run the code:

1. Run the full pipeline on a synthetic pool. This will generate
    a transaction pool with one stress episode, compute AXI and price loans on it.
2. Compute an index from a handful of transactions defined in code.
3. Compare credit-sensitive pricing policies with the long-run risk parameters.

Usage via cli:
    python3 -m src.example --option 1
"""

from __future__ import annotations

import argparse
from dataclasses import replace
from datetime import date, timedelta
from pathlib import Path

from creditindex import Config, Transaction, build_index, equivalent_spread
from creditindex.generate.synthetic import (
    StressWindow,
    SyntheticConfig,
    generate_overnight_rates,
    generate_synthetic,
)
from creditindex.loans import fixed_spread_loan, income_equivalent_loan, stress_report
from creditindex.rates import (
    CompositeRateSpec,
    compounded_average,
    credit_sensitive_rate,
)
from creditindex.reporting import emit_report, render_table
from creditindex.risk import RarParams, discount_curve
from creditindex.transactions import IndexScope, ScopeTag

cfg = Config(
    WINDOW_BUSINESS_DAYS=21,
    CREDIT_SENSITIVITY=0.7,
    HORIZON_MONTHS=(1, 3),
    STRESS_ANCHORS={"Spring stress": date(2023, 4, 3)},
)

synth_cfg = SyntheticConfig(
    seed=7,
    start=date(2023, 1, 2),
    end=date(2023, 9, 29),
    stress_windows=(StressWindow(date(2023, 4, 3), date(2023, 5, 31), 6.0, 0.5),),
)


def _example_transactions() -> list[Transaction]:
    """Five weeks of bank trades across the curve plus one wider nonbank trade a day."""
    out: list[Transaction] = []
    day = date(2024, 1, 2)
    while len({t.trade_date for t in out}) < 25:
        if day.weekday() < 5:
            out += [
                Transaction(day, 0.25, 300e6, 0.06, ScopeTag.BANK),
                Transaction(day, 0.75, 200e6, 0.08, ScopeTag.BANK),
                Transaction(day, 2.0, 50e6, 0.65, ScopeTag.BANK),
                Transaction(day, 4.5, 20e6, 0.90, ScopeTag.BANK),
                Transaction(day, 1.5, 100e6, 0.85, ScopeTag.NONBANK),
            ]
        day += timedelta(days=1)
    return out


def parse_args() -> argparse.Namespace:
    parser = argparse.ArgumentParser(description="Run creditindex examples.")
    parser.add_argument(
        "--option",
        type=int,
        default=1,
        choices=(1, 2, 3),
        help="Example scenario to run (default: 1).",
    )
    parser.add_argument(
        "--out", type=Path, default=Path("outputs"), help="Output directory."
    )
    return parser.parse_args()


def run_option(option: int, out_dir: Path = Path("outputs")) -> None:
    print(f"Running example code with option {option}")

    # Synthetic pool -> AXI -> 30-day compounded SOFR -> loan stress report.
    if option == 1:

        pool = generate_synthetic(synth_cfg)
        build = build_index(pool, IndexScope.AXI, cfg)
        sofr = compounded_average(generate_overnight_rates(synth_cfg))
        funding = credit_sensitive_rate(CompositeRateSpec(sofr, 0.0, 1.0), build.index)
        funding = funding.with_values(funding.values, name="SOFR+AXI")

        schemes = [
            fixed_spread_loan(
                "SOFR+AXI", funding, cfg.LOAN_SPREAD_PCT, cfg.NOTIONAL
            ),
            income_equivalent_loan(
                "SOFR", sofr, funding, cfg.NOTIONAL, cfg.LOAN_SPREAD_PCT
            ),
        ]
        report = stress_report(
            schemes, funding, cfg.STRESS_ANCHORS, cfg.HORIZON_MONTHS
        )
        emit_report(
            report,
            "example_stress_report",
            out_dir,
            title="Extra profit of SOFR+AXI loans",
            echo=True,
        )

    # Index from transactions defined in code, with and without nonbank trades.
    elif option == 2:

        pool = _example_transactions()
        for scope in IndexScope:
            index = build_index(pool, scope, replace(cfg, WINDOW_BUSINESS_DAYS=5))
            print(
                f"{scope.value.upper()}: first value {index.index.values.iloc[0]:.4f}% "
                f"on {index.index.dates[0]} ({len(index.index)} published)"
            )

    # Discount a lender can offer for sharing credit risk with the borrower.
    elif option == 3:

        params = RarParams()
        for c in (0.0, 0.5, 0.7, 1.0):
            prime = equivalent_spread(1.0, c, params)
            print(f"c={c:.1f}: spread 1.00% is worth {prime:.4f}%")
        curve = discount_curve(1.0, params, grid=[0.0, 0.25, 0.5, 0.75, 1.0])
        render_table(curve, "Discount curve at a 1% spread")
    else:
        raise SystemExit(f"Unknown option {option}")


def main() -> None:
    args = parse_args()
    run_option(args.option, args.out)


if __name__ == "__main__":
    main()
