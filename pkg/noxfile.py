# noxfile.py
from nox_poetry import Session, session

PY_VERSIONS = ["3.11"]
SMOKE_DIR = "outputs/smoke"


@session(python=PY_VERSIONS)
def format(session: Session) -> None:
    """Auto-format code."""
    session.install("black", "isort")
    session.run("isort", "src", "tests")
    session.run("black", "src", "tests")


@session(python=PY_VERSIONS)
def typecheck_mypy(session: Session) -> None:
    session.install("mypy", "pytest")
    session.install("pandas-stubs~=2.2")
    session.install(".")
    session.run("mypy", "--config-file", "pyproject.toml")


@session(python=PY_VERSIONS)
def lint(session: Session) -> None:
    session.install("ruff", "black", "isort")
    session.run("ruff", "check", "src", "tests")
    session.run("isort", "--check-only", "src", "tests")
    session.run("black", "--check", "src", "tests")


@session(python=PY_VERSIONS)
def tests(session: Session) -> None:
    """Unit tests with line coverage for the creditindex package."""
    session.install(".")
    session.install("pytest", "pytest-cov")
    session.run("pytest", "-q", "--cov=creditindex", "--cov-report=term-missing")


@session(python=PY_VERSIONS)
def smoke(session: Session) -> None:
    """synth -> index -> rates -> loan -> risk -> stats through the installed CLI."""
    session.install(".")
    data, out = f"{SMOKE_DIR}/data", f"{SMOKE_DIR}/out"
    session.run("creditindex", "synth", "--out", data, "--seed", "7")
    session.run(
        "creditindex", "index", "compute", "--in", f"{data}/transactions.csv", "--out", out
    )
    session.run(
        "creditindex",
        "rates",
        "--overnight",
        f"{data}/sofr_overnight.csv",
        "--axi",
        f"{out}/axi.csv",
        "--out",
        out,
    )
    session.run(
        "creditindex",
        "loan",
        "--reference",
        f"{out}/sofr_30d_compound.csv",
        "--axi",
        f"{out}/axi.csv",
        "--out",
        out,
    )
    session.run("creditindex", "risk", "--out", out)
    session.run(
        "creditindex",
        "stats",
        "--target",
        f"{out}/axi_daily.csv",
        "--manifest",
        f"{data}/indicators_manifest.csv",
        "--out",
        out,
    )
