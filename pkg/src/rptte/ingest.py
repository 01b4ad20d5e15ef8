"""Parsing of the five raw tabular files into validated domain records.

Every input row either becomes a record or a rejection with a machine-readable
reason; nothing is silently dropped. Duplicate-id policy is first occurrence
wins, so reruns over the same file are order-stable.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import logging
from dataclasses import dataclass, field, asdict
from datetime import date, datetime
from pathlib import Path

from .records import (
    AuditRecord,
    DateRange,
    FormatError,
    InvestmentEdge,
    InvestorProfile,
    Invoice,
    TaxpayerProfile,
)

log = logging.getLogger(__name__)

TAXPAYER_COLUMNS = ["id", "industry", "ownership_type", "region", "merchandise"]
INVESTOR_COLUMNS = ["id", "entity_kind"]
INVESTMENT_COLUMNS = ["investor_id", "investee_id", "amount", "share_ratio"]
INVOICE_COLUMNS = ["invoice_id", "date", "seller_id", "buyer_id", "amount", "vat_amount"]
AUDIT_COLUMNS = ["taxpayer_id", "audit_date", "violation_type", "description", "action_taken", "tax_payable"]

ENTITY_KINDS = {"person", "organization"}

STANDARD_FILENAMES = {
    "taxpayers": "taxpayers.csv",
    "investors": "investors.csv",
    "investments": "investments.csv",
    "invoices": "invoices.csv",
    "audits": "audits.csv",
    "manifest": "manifest.json",
}


@dataclass(frozen=True)
class Rejection:
    file: str
    line: int
    reason: str


@dataclass(frozen=True)
class Manifest:
    """Declares the calendar range the invoice data is valid for."""

    date_start: date
    date_end: date

    @property
    def date_range(self) -> DateRange:
        return DateRange(self.date_start, self.date_end)


@dataclass
class ParseResult:
    records: list
    rejections: list[Rejection] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


@dataclass
class Dataset:
    taxpayers: list[TaxpayerProfile]
    investors: list[InvestorProfile]
    investments: list[InvestmentEdge]
    invoices: list[Invoice]
    audits: list[AuditRecord]
    manifest: Manifest
    rejections: list[Rejection] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    def fingerprint(self) -> str:
        """Content hash of the parsed records; independent of file byte quirks."""
        h = hashlib.sha256()
        for part in (self.taxpayers, self.investors, self.investments, self.invoices, self.audits):
            for rec in part:
                h.update(json.dumps(asdict(rec), sort_keys=True, default=str).encode())
            h.update(b"\x00")
        h.update(self.manifest.date_start.isoformat().encode())
        h.update(self.manifest.date_end.isoformat().encode())
        return h.hexdigest()


def parse_iso_date(raw: str) -> date:
    return datetime.strptime(raw.strip(), "%Y-%m-%d").date()


def _parse_amount(raw: str) -> float:
    value = float(raw)
    if value != value or value in (float("inf"), float("-inf")):
        raise ValueError("non-finite amount")
    return value


def _open_rows(source, columns: list[str], file_label: str):
    """Yield (line_number, row_dict) after strict header validation.

    Accepts a path, raw bytes, a readable stream, or inline text (a str
    containing a newline).
    """
    if isinstance(source, str) and ("\n" in source or source == ""):
        text = source
    elif isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="utf-8")
    elif isinstance(source, bytes):
        text = source.decode("utf-8")
    elif hasattr(source, "read"):
        data = source.read()
        text = data.decode("utf-8") if isinstance(data, bytes) else data
    else:
        raise TypeError(f"unsupported source type {type(source)!r}")

    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise FormatError(f"{file_label}: empty file, expected header {columns}")
    header = [h.strip() for h in header]
    if sorted(header) != sorted(columns):
        raise FormatError(f"{file_label}: malformed header {header}, expected columns {columns}")

    index = [header.index(c) for c in columns]
    for line_no, row in enumerate(reader, start=2):
        if not row or all(not cell.strip() for cell in row):
            continue
        if len(row) != len(columns):
            yield line_no, None
            continue
        yield line_no, {c: row[i].strip() for c, i in zip(columns, index)}


def parse_taxpayers(source) -> ParseResult:
    result = ParseResult(records=[])
    seen: set[str] = set()
    for line_no, row in _open_rows(source, TAXPAYER_COLUMNS, "taxpayers"):
        if row is None:
            result.rejections.append(Rejection("taxpayers", line_no, "wrong field count"))
            continue
        if not row["id"]:
            result.rejections.append(Rejection("taxpayers", line_no, "empty id"))
            continue
        if row["id"] in seen:
            result.rejections.append(Rejection("taxpayers", line_no, f"duplicate id: {row['id']}"))
            continue
        seen.add(row["id"])
        result.records.append(TaxpayerProfile(
            id=row["id"],
            industry=row["industry"],
            ownership_type=row["ownership_type"],
            region=row["region"],
            merchandise=row["merchandise"],
        ))
    return result


def parse_investors(source) -> ParseResult:
    result = ParseResult(records=[])
    seen: set[str] = set()
    for line_no, row in _open_rows(source, INVESTOR_COLUMNS, "investors"):
        if row is None:
            result.rejections.append(Rejection("investors", line_no, "wrong field count"))
            continue
        if not row["id"]:
            result.rejections.append(Rejection("investors", line_no, "empty id"))
            continue
        if row["id"] in seen:
            result.rejections.append(Rejection("investors", line_no, f"duplicate id: {row['id']}"))
            continue
        if row["entity_kind"] not in ENTITY_KINDS:
            result.rejections.append(
                Rejection("investors", line_no, f"entity_kind must be one of {sorted(ENTITY_KINDS)}"))
            continue
        seen.add(row["id"])
        result.records.append(InvestorProfile(id=row["id"], entity_kind=row["entity_kind"]))
    return result


def parse_investments(source) -> ParseResult:
    result = ParseResult(records=[])
    for line_no, row in _open_rows(source, INVESTMENT_COLUMNS, "investments"):
        if row is None:
            result.rejections.append(Rejection("investments", line_no, "wrong field count"))
            continue
        if not row["investor_id"] or not row["investee_id"]:
            result.rejections.append(Rejection("investments", line_no, "empty entity id"))
            continue
        if row["investor_id"] == row["investee_id"]:
            result.rejections.append(Rejection("investments", line_no, "investor equals investee"))
            continue
        try:
            amount = _parse_amount(row["amount"])
            ratio = _parse_amount(row["share_ratio"])
        except ValueError:
            result.rejections.append(Rejection("investments", line_no, "unparseable amount or ratio"))
            continue
        if amount < 0:
            result.rejections.append(Rejection("investments", line_no, "negative amount"))
            continue
        if not (0.0 < ratio <= 1.0):
            result.rejections.append(Rejection("investments", line_no, "share_ratio outside (0, 1]"))
            continue
        result.records.append(InvestmentEdge(
            investor_id=row["investor_id"],
            investee_id=row["investee_id"],
            amount=amount,
            share_ratio=ratio,
        ))

    # Registries do contain investees whose inbound ratios sum above 1; accept with a warning.
    inbound: dict[str, float] = {}
    for edge in result.records:
        inbound[edge.investee_id] = inbound.get(edge.investee_id, 0.0) + edge.share_ratio
    for investee, total in sorted(inbound.items()):
        if total > 1.0 + 1e-9:
            msg = f"investments: inbound share ratios for {investee} sum to {total:.4f} (> 1)"
            result.warnings.append(msg)
            log.warning(msg)
    return result


def parse_invoices(source, manifest: Manifest | None = None) -> ParseResult:
    result = ParseResult(records=[])
    seen: set[str] = set()
    for line_no, row in _open_rows(source, INVOICE_COLUMNS, "invoices"):
        if row is None:
            result.rejections.append(Rejection("invoices", line_no, "wrong field count"))
            continue
        if not row["invoice_id"]:
            result.rejections.append(Rejection("invoices", line_no, "empty invoice_id"))
            continue
        if row["invoice_id"] in seen:
            result.rejections.append(Rejection("invoices", line_no, f"duplicate invoice_id: {row['invoice_id']}"))
            continue
        if not row["seller_id"] or not row["buyer_id"]:
            result.rejections.append(Rejection("invoices", line_no, "empty entity id"))
            continue
        if row["seller_id"] == row["buyer_id"]:
            result.rejections.append(Rejection("invoices", line_no, "seller equals buyer"))
            continue
        try:
            day = parse_iso_date(row["date"])
        except ValueError:
            result.rejections.append(Rejection("invoices", line_no, "unparseable date"))
            continue
        try:
            amount = _parse_amount(row["amount"])
            vat = _parse_amount(row["vat_amount"])
        except ValueError:
            result.rejections.append(Rejection("invoices", line_no, "unparseable amount"))
            continue
        if amount <= 0:
            result.rejections.append(Rejection("invoices", line_no, "amount must be > 0"))
            continue
        if vat < 0:
            result.rejections.append(Rejection("invoices", line_no, "vat_amount must be >= 0"))
            continue
        if manifest is not None and day not in manifest.date_range:
            result.rejections.append(Rejection(
                "invoices", line_no,
                f"date {day} outside declared range {manifest.date_start}..{manifest.date_end}"))
            continue
        seen.add(row["invoice_id"])
        result.records.append(Invoice(
            invoice_id=row["invoice_id"],
            date=day,
            seller_id=row["seller_id"],
            buyer_id=row["buyer_id"],
            amount=amount,
            vat_amount=vat,
        ))
    return result


def parse_audits(source) -> ParseResult:
    result = ParseResult(records=[])
    for line_no, row in _open_rows(source, AUDIT_COLUMNS, "audits"):
        if row is None:
            result.rejections.append(Rejection("audits", line_no, "wrong field count"))
            continue
        if not row["taxpayer_id"]:
            result.rejections.append(Rejection("audits", line_no, "empty taxpayer_id"))
            continue
        try:
            day = parse_iso_date(row["audit_date"])
        except ValueError:
            result.rejections.append(Rejection("audits", line_no, "unparseable audit_date"))
            continue
        try:
            payable = _parse_amount(row["tax_payable"])
        except ValueError:
            result.rejections.append(Rejection("audits", line_no, "unparseable tax_payable"))
            continue
        if payable < 0:
            result.rejections.append(Rejection("audits", line_no, "tax_payable must be >= 0"))
            continue
        result.records.append(AuditRecord(
            taxpayer_id=row["taxpayer_id"],
            audit_date=day,
            violation_type=row["violation_type"],
            description=row["description"],
            action_taken=row["action_taken"],
            tax_payable=payable,
        ))
    return result


def load_manifest(source) -> Manifest:
    if isinstance(source, (str, Path)):
        raw = Path(source).read_text(encoding="utf-8")
    else:
        raw = source.read()
        if isinstance(raw, bytes):
            raw = raw.decode("utf-8")
    try:
        payload = json.loads(raw)
        start = parse_iso_date(payload["date_start"])
        end = parse_iso_date(payload["date_end"])
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"manifest: {exc}") from exc
    if start > end:
        raise FormatError(f"manifest: date_start {start} after date_end {end}")
    return Manifest(date_start=start, date_end=end)


def load_dataset(directory) -> Dataset:
    """Parse a dataset directory laid out with the standard file names."""
    directory = Path(directory)
    paths = {key: directory / name for key, name in STANDARD_FILENAMES.items()}
    for key, path in paths.items():
        if not path.exists():
            raise FileNotFoundError(f"missing {key} file: {path}")
    return load_dataset_files(
        taxpayers=paths["taxpayers"],
        investors=paths["investors"],
        investments=paths["investments"],
        invoices=paths["invoices"],
        audits=paths["audits"],
        manifest=paths["manifest"],
    )


def load_dataset_files(taxpayers, investors, investments, invoices, audits, manifest) -> Dataset:
    man = load_manifest(manifest)
    parts = {
        "taxpayers": parse_taxpayers(taxpayers),
        "investors": parse_investors(investors),
        "investments": parse_investments(investments),
        "invoices": parse_invoices(invoices, man),
        "audits": parse_audits(audits),
    }
    rejections = [r for part in parts.values() for r in part.rejections]
    warnings = [w for part in parts.values() for w in part.warnings]
    return Dataset(
        taxpayers=parts["taxpayers"].records,
        investors=parts["investors"].records,
        investments=parts["investments"].records,
        invoices=parts["invoices"].records,
        audits=parts["audits"].records,
        manifest=man,
        rejections=rejections,
        warnings=warnings,
    )


# --- writers -----------------------------------------------------------------
# The synthesizer and the masking pass emit exactly the formats parsed above.

def _write_csv(path, columns, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        writer.writerows(rows)


def _money(x: float) -> str:
    return f"{x:.2f}"


def write_taxpayers(path, records: list[TaxpayerProfile]):
    _write_csv(path, TAXPAYER_COLUMNS,
               [(r.id, r.industry, r.ownership_type, r.region, r.merchandise) for r in records])


def write_investors(path, records: list[InvestorProfile]):
    _write_csv(path, INVESTOR_COLUMNS, [(r.id, r.entity_kind) for r in records])


def write_investments(path, records: list[InvestmentEdge]):
    _write_csv(path, INVESTMENT_COLUMNS,
               [(r.investor_id, r.investee_id, _money(r.amount), f"{r.share_ratio:.6f}") for r in records])


def write_invoices(path, records: list[Invoice]):
    _write_csv(path, INVOICE_COLUMNS,
               [(r.invoice_id, r.date.isoformat(), r.seller_id, r.buyer_id,
                 _money(r.amount), _money(r.vat_amount)) for r in records])


def write_audits(path, records: list[AuditRecord]):
    _write_csv(path, AUDIT_COLUMNS,
               [(r.taxpayer_id, r.audit_date.isoformat(), r.violation_type,
                 r.description, r.action_taken, _money(r.tax_payable)) for r in records])


def write_manifest(path, manifest: Manifest):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps({
        "date_start": manifest.date_start.isoformat(),
        "date_end": manifest.date_end.isoformat(),
    }, indent=2) + "\n", encoding="utf-8")


def write_dataset(directory, dataset: Dataset):
    directory = Path(directory)
    write_taxpayers(directory / STANDARD_FILENAMES["taxpayers"], dataset.taxpayers)
    write_investors(directory / STANDARD_FILENAMES["investors"], dataset.investors)
    write_investments(directory / STANDARD_FILENAMES["investments"], dataset.investments)
    write_invoices(directory / STANDARD_FILENAMES["invoices"], dataset.invoices)
    write_audits(directory / STANDARD_FILENAMES["audits"], dataset.audits)
    write_manifest(directory / STANDARD_FILENAMES["manifest"], dataset.manifest)


def write_rejections(path, rejections: list[Rejection]):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for r in rejections:
            fh.write(json.dumps({"file": r.file, "line": r.line, "reason": r.reason}) + "\n")
