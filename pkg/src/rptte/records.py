"""Domain record types shared across the pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta


class FormatError(ValueError):
    """Raised when an input file violates its declared format (bad header, bad manifest)."""


class ConfigError(ValueError):
    """Raised when a parameter or configuration value is out of its allowed range."""


class UnknownEntityError(KeyError):
    """Raised when an entity id is not present in the structure being queried."""


class PathNotFoundError(LookupError):
    """Raised when no ownership path exists between the requested entities."""


def to_cents(amount: float) -> int:
    """Currency amounts carry 2 fraction digits; integer cents keep sums exact."""
    return int(round(amount * 100))


def from_cents(cents: int) -> float:
    return cents / 100.0


@dataclass(frozen=True)
class DateRange:
    """Inclusive span of calendar days."""

    start: date
    end: date

    def __post_init__(self):
        if self.start > self.end:
            raise ConfigError(f"date range start {self.start} is after end {self.end}")

    @property
    def n_days(self) -> int:
        return (self.end - self.start).days + 1

    def index(self, d: date) -> int:
        return (d - self.start).days

    def day(self, idx: int) -> date:
        return self.start + timedelta(days=idx)

    def __contains__(self, d: date) -> bool:
        return self.start <= d <= self.end

    def days(self):
        for i in range(self.n_days):
            yield self.start + timedelta(days=i)


@dataclass(frozen=True)
class TaxpayerProfile:
    id: str
    industry: str
    ownership_type: str
    region: str
    merchandise: str


@dataclass(frozen=True)
class InvestorProfile:
    id: str
    entity_kind: str  # "person" | "organization"


@dataclass(frozen=True)
class InvestmentEdge:
    investor_id: str
    investee_id: str
    amount: float
    share_ratio: float


@dataclass(frozen=True)
class Invoice:
    invoice_id: str
    date: date
    seller_id: str
    buyer_id: str
    amount: float
    vat_amount: float


@dataclass(frozen=True)
class AuditRecord:
    taxpayer_id: str
    audit_date: date
    violation_type: str
    description: str
    action_taken: str
    tax_payable: float

    @property
    def is_violation(self) -> bool:
        # Records with an empty violation type are clean audits.
        return bool(self.violation_type.strip())
