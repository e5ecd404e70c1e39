from __future__ import annotations

from datetime import date
from typing import Optional


class CreditIndexError(ValueError):
    """Base class for every data, validation and computation error in the package."""


class ConfigError(CreditIndexError):
    """A configuration object holds out-of-range or inconsistent values."""


class IneligibleTransactionError(CreditIndexError):
    """A transaction falls outside the (0, 5] year maturity range."""


class NoDataError(CreditIndexError):
    """Nothing to aggregate: empty input, zero total weight or zero volume."""

    def __init__(self, message: str, on_date: Optional[date] = None) -> None:
        if on_date is not None:
            message = f"{message} (date {on_date.isoformat()})"
        super().__init__(message)
        self.on_date = on_date


class MissingDataError(CreditIndexError):
    """A rate series does not cover the requested dates."""

    def __init__(self, message: str, first_missing: Optional[date] = None) -> None:
        if first_missing is not None:
            message = f"{message}; first missing date {first_missing.isoformat()}"
        super().__init__(message)
        self.first_missing = first_missing


class BenchmarkUnavailableError(CreditIndexError):
    """Neither the primary index nor its fallback is published on a date."""


class AlignmentError(CreditIndexError):
    """Two series share no dates."""


class DegenerateDenominatorError(CreditIndexError):
    """A closed-form ratio has a zero denominator."""


class UndefinedCorrelationError(CreditIndexError):
    """Correlation is undefined (zero variance or too few observations)."""


class SingularDesignError(CreditIndexError):
    """A regression design matrix is rank deficient."""


class SchemaError(CreditIndexError):
    """An input file does not have the expected header or kind annotation."""


class ValidationError(CreditIndexError):
    """A single CSV row failed validation."""

    def __init__(
        self, message: str, line: int, column: Optional[str] = None
    ) -> None:
        where = f"line {line}" + (f", column '{column}'" if column else "")
        super().__init__(f"{where}: {message}")
        self.line = line
        self.column = column
