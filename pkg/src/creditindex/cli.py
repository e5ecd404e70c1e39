"""
Command-line entry point.

Usage examples:
  creditindex synth --out data/ --seed 7
  creditindex index compute --in data/transactions.csv --scope axi --out out/
  creditindex index fallback --in data/transactions.csv --out out/
  creditindex rates --overnight data/sofr_overnight.csv --axi out/axi.csv --out out/
  creditindex loan --reference out/sofr_30d_compound.csv --axi out/axi.csv --out out/
  creditindex risk --out out/ --spread 1.0 --sensitivity 0.7
  creditindex stats --target out/axi.csv \
      --manifest data/indicators_manifest.csv --out out/

Every subcommand accepts --config FILE, --set KEY=VALUE (repeatable), --format
{csv,table,json} and --verbose. Flags override the config file, which overrides
the defaults. Exit status is 0 on success, 1 on a data or computation error and
2 on a usage error. Each run writes `run_manifest.txt` into --out, and a
successful run also writes `<command>_report.txt` with its console summary.
"""
from __future__ import annotations

import argparse
import logging
import sys
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Callable, Optional, Sequence

from creditindex import __version__
from creditindex.config import Config, apply_overrides, load_config
from creditindex.errors import CreditIndexError
from creditindex.generate.synthetic import SyntheticConfig, load_synthetic_config
from creditindex.main import (
    Outputs,
    default_scenario,
    run_index_compute,
    run_index_fallback,
    run_loan,
    run_rates,
    run_risk,
    run_stats,
    run_synth,
)
from creditindex.reporting import ReportDocument, set_active_report
from creditindex.stats import Frequency, TransformKind, TransformSpec

logger = logging.getLogger("creditindex")

RUN_MANIFEST = "run_manifest.txt"

# CLI flag (argparse dest) -> Config field
_FLAG_KEYS = {
    "window": "WINDOW_BUSINESS_DAYS",
    "publish_lag": "PUBLISH_LAG",
    "sensitivity": "CREDIT_SENSITIVITY",
    "elasticity": "ELASTICITY",
    "sigma_delta_mode": "SIGMA_DELTA_MODE",
    "workers": "NUM_PARALLEL_WORKERS",
}


# ----------------------------
# Argument types
# ----------------------------
def _key_value(text: str) -> tuple[str, str]:
    key, sep, value = text.partition("=")
    if not sep or not key.strip():
        raise argparse.ArgumentTypeError(f"expected KEY=VALUE, got {text!r}")
    return key.strip(), value.strip()


def _anchor(text: str) -> tuple[str, date]:
    name, value = _key_value(text)
    try:
        return name, date.fromisoformat(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO-8601 date: {value!r}") from None


def _iso_date(text: str) -> date:
    try:
        return date.fromisoformat(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an ISO-8601 date: {text!r}") from None


# ----------------------------
# Parser
# ----------------------------
def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", type=Path, required=True, help="Output directory.")
    common.add_argument(
        "--config", type=Path, default=None, help="Flat KEY = value file."
    )
    common.add_argument(
        "--set",
        dest="overrides",
        type=_key_value,
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="Override one configuration key (repeatable).",
    )
    common.add_argument(
        "--format", dest="fmt", choices=("csv", "table", "json"), default="csv"
    )
    common.add_argument("--workers", type=int, default=None)
    common.add_argument("--verbose", "-v", action="store_true")
    return common


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="creditindex",
        description="Credit-spread index and credit-sensitive loan analytics.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    common = _common()

    p = sub.add_parser("synth", parents=[common], help="Write a synthetic data set.")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--synth-config", type=Path, default=None)
    p.add_argument("--start", type=_iso_date, default=None)
    p.add_argument("--end", type=_iso_date, default=None)
    p.set_defaults(handler=_cmd_synth)

    index = sub.add_parser("index", help="Compute AXI/FXI.")
    index_sub = index.add_subparsers(dest="index_command", required=True)
    p = index_sub.add_parser("compute", parents=[common])
    p.add_argument("--in", dest="inputs", type=Path, required=True)
    p.add_argument("--scope", choices=("axi", "fxi"), default="axi")
    p.add_argument("--window", type=int, default=None)
    p.add_argument("--publish-lag", type=int, choices=(0, 1), default=None)
    p.add_argument("--no-precheck", action="store_true")
    p.set_defaults(handler=_cmd_index_compute)
    p = index_sub.add_parser("fallback", parents=[common])
    p.add_argument("--in", dest="inputs", type=Path, required=True)
    p.add_argument("--window", type=int, default=None)
    p.set_defaults(handler=_cmd_index_fallback)

    p = sub.add_parser("rates", parents=[common], help="Reference and composite rates.")
    p.add_argument("--overnight", type=Path, required=True)
    p.add_argument("--axi", type=Path, required=True)
    p.add_argument("--spread", type=float, default=0.0, help="Fixed spread, percent.")
    p.add_argument("--sensitivity", type=float, default=None)
    p.add_argument("--daily", type=Path, default=None, help="Daily AXI spreads.")
    p.add_argument("--libor", type=Path, default=None)
    p.add_argument("--term-sofr", type=Path, default=None)
    p.set_defaults(handler=_cmd_rates)

    p = sub.add_parser("loan", parents=[common], help="Loan profit under stress.")
    p.add_argument("--reference", type=Path, required=True)
    p.add_argument("--axi", type=Path, required=True)
    p.add_argument("--libor", type=Path, default=None)
    p.add_argument(
        "--anchor", type=_anchor, action="append", default=[], metavar="NAME=DATE"
    )
    p.set_defaults(handler=_cmd_loan)

    p = sub.add_parser("risk", parents=[common], help="Spread discount curve.")
    p.add_argument("--spread", type=float, default=None, help="Loan spread, percent.")
    p.add_argument("--sensitivity", type=float, default=None)
    p.add_argument("--elasticity", type=float, default=None)
    p.add_argument(
        "--sigma-delta-mode", choices=("maturity_weighted", "volume"), default=None
    )
    p.add_argument("--index", type=Path, default=None)
    p.add_argument("--decompositions", type=Path, default=None)
    p.set_defaults(handler=_cmd_risk)

    p = sub.add_parser("stats", parents=[common], help="Correlation and Granger tests.")
    p.add_argument("--target", type=Path, required=True)
    p.add_argument("--manifest", type=Path, required=True)
    p.add_argument(
        "--transform", choices=[k.value for k in TransformKind], default=None
    )
    p.add_argument("--frequency", choices=[f.value for f in Frequency], default=None)
    p.set_defaults(handler=_cmd_stats)
    return parser


# ----------------------------
# Handlers
# ----------------------------
def _cmd_synth(args: argparse.Namespace, config: Config) -> Outputs:
    synth_cfg: SyntheticConfig = (
        load_synthetic_config(args.synth_config)
        if args.synth_config
        else default_scenario()
    )
    if args.seed is not None:
        synth_cfg.seed = args.seed
    if args.start or args.end:
        synth_cfg.start = args.start or synth_cfg.start
        synth_cfg.end = args.end or synth_cfg.end
        kept = tuple(
            w
            for w in synth_cfg.stress_windows
            if w.start >= synth_cfg.start and w.end <= synth_cfg.end
        )
        if len(kept) < len(synth_cfg.stress_windows):
            logger.info(
                "dropped stress windows outside %s..%s", synth_cfg.start, synth_cfg.end
            )
        synth_cfg.stress_windows = kept
    return run_synth(synth_cfg, args.out, config)


def _cmd_index_compute(args: argparse.Namespace, config: Config) -> Outputs:
    _, outputs = run_index_compute(
        args.inputs,
        args.scope,
        args.out,
        config,
        args.fmt,
        precheck=not args.no_precheck,
    )
    return outputs


def _cmd_index_fallback(args: argparse.Namespace, config: Config) -> Outputs:
    _, outputs = run_index_fallback(args.inputs, args.out, config, args.fmt)
    return outputs


def _cmd_rates(args: argparse.Namespace, config: Config) -> Outputs:
    return run_rates(
        args.overnight,
        args.axi,
        args.out,
        config,
        args.fmt,
        fixed_spread=args.spread,
        daily_spreads_path=args.daily,
        libor_path=args.libor,
        term_sofr_path=args.term_sofr,
    )


def _cmd_loan(args: argparse.Namespace, config: Config) -> Outputs:
    _, outputs = run_loan(
        args.reference,
        args.axi,
        args.out,
        config,
        args.fmt,
        libor_path=args.libor,
        anchors=dict(args.anchor) or None,
    )
    return outputs


def _cmd_risk(args: argparse.Namespace, config: Config) -> Outputs:
    _, outputs = run_risk(
        args.out,
        config,
        args.fmt,
        spread=args.spread,
        index_path=args.index,
        decompositions_path=args.decompositions,
    )
    return outputs


def _cmd_stats(args: argparse.Namespace, config: Config) -> Outputs:
    target_spec: Optional[TransformSpec] = None
    if args.transform or args.frequency:
        target_spec = TransformSpec(
            kind=args.transform or TransformKind.DIFFERENCE,
            frequency=args.frequency or Frequency.DAILY,
        )
    return run_stats(
        args.target, args.manifest, args.out, config, args.fmt, target_spec=target_spec
    )


# ----------------------------
# Plumbing
# ----------------------------
def _configure_logging(verbose: bool) -> None:
    for handler in list(logger.handlers):
        if getattr(handler, "_creditindex_cli", False):
            logger.removeHandler(handler)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    handler._creditindex_cli = True  # type: ignore[attr-defined]
    logger.addHandler(handler)
    logger.setLevel(logging.DEBUG if verbose else logging.INFO)


def resolve_config(args: argparse.Namespace) -> Config:
    """Defaults, then --config, then --set pairs, then dedicated flags."""
    config = load_config(args.config)
    overrides: dict[str, object] = dict(args.overrides)
    for dest, key in _FLAG_KEYS.items():
        value = getattr(args, dest, None)
        if value is not None:
            overrides[key] = value
    apply_overrides(config, overrides)
    config.validate()
    return config


def _command_name(args: argparse.Namespace) -> str:
    if args.command == "index":
        return f"index {args.index_command}"
    return args.command


def report_name(args: argparse.Namespace) -> str:
    """Console report of one run, e.g. `index_compute_report.txt`."""
    slug = _command_name(args).replace(" ", "_")
    return f"{slug}_report.txt"


def write_run_manifest(
    out_dir: Path,
    command: str,
    argv: Sequence[str],
    exit_code: int,
    config: Optional[Config],
    outputs: Optional[Outputs],
) -> Path:
    """Flat `key = value` record of one invocation, written next to its outputs."""
    lines = {
        "command": command,
        "argv": " ".join(argv),
        "version": __version__,
        "exit_code": str(exit_code),
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    for key, path in (outputs or {}).items():
        lines[f"output.{key}"] = str(path)
    if config is not None:
        for key, value in config.as_flat_dict().items():
            lines[f"config.{key}"] = value
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / RUN_MANIFEST
    path.write_text("".join(f"{k} = {v}\n" for k, v in lines.items()), encoding="utf-8")
    return path


def run(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    _configure_logging(args.verbose)
    handler: Callable[[argparse.Namespace, Config], Outputs] = args.handler
    config: Optional[Config] = None
    outputs: Optional[Outputs] = None
    exit_code = 1
    report = ReportDocument(args.out / report_name(args))
    set_active_report(report)
    try:
        config = resolve_config(args)
        outputs = handler(args, config)
        report.write()
        outputs["report"] = report.path
        exit_code = 0
        print(f"✅ {_command_name(args)}: {len(outputs)} output(s) in {args.out}")
    except (CreditIndexError, ValueError) as exc:
        logger.error("%s", exc)
        print(f"❌ {_command_name(args)} failed: {exc}", file=sys.stderr)
    except OSError as exc:
        logger.error("I/O error: %s", exc)
        print(f"❌ {_command_name(args)} failed: {exc}", file=sys.stderr)
    finally:
        set_active_report(None)
    try:
        write_run_manifest(
            args.out, _command_name(args), argv, exit_code, config, outputs
        )
    except OSError as exc:
        logger.warning("could not write %s: %s", RUN_MANIFEST, exc)
    return exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
