"""Privacy masking: keyed pseudonyms for entity ids, numeric variance for invoice amounts.

Everything is keyed by (seed, record identity), so masking the same dataset with
the same seed is byte-identical and records can be masked independently in any
order. Dates are never touched, which keeps the date distribution intact, and
ids are mapped consistently across files, which keeps the masked graph
isomorphic to the original.
"""

from __future__ import annotations

import hashlib
import math
import random
from dataclasses import replace

from .ingest import Dataset
from .records import ConfigError

_SCRAMBLE_SUFFIX_LEN = 4


class Masker:
    def __init__(self, seed: int, variance_pct: float):
        if not (0.0 < variance_pct <= 0.5):
            raise ConfigError(f"variance_pct must be in (0, 0.5], got {variance_pct}")
        self.seed = seed
        self.variance_pct = variance_pct
        self._key = hashlib.blake2b(str(seed).encode(), digest_size=16).digest()

    def _digest(self, label: str, value: str, size: int = 8) -> bytes:
        return hashlib.blake2b(f"{label}:{value}".encode(), key=self._key, digest_size=size).digest()

    def pseudonym(self, entity_id: str) -> str:
        return "e" + self._digest("id", entity_id).hex()

    def factor(self, invoice_id: str) -> float:
        """Per-record multiplier drawn uniformly from [1 - v, 1 + v)."""
        u = int.from_bytes(self._digest("amount", invoice_id), "big") / 2.0 ** 64
        v = self.variance_pct
        return 1.0 - v + 2.0 * v * u

    def vary_amount(self, amount: float, invoice_id: str) -> float:
        """Scale and round to cents, clamped so the declared band holds exactly."""
        if amount == 0.0:
            return 0.0
        v = self.variance_pct
        lo = math.ceil(amount * (1.0 - v) * 100 - 1e-9) / 100.0
        hi = math.floor(amount * (1.0 + v) * 100 + 1e-9) / 100.0
        masked = round(amount * self.factor(invoice_id), 2)
        return min(max(masked, lo), hi)

    def scramble_text(self, text: str) -> str:
        """Permute the characters and append keyed noise, per-value deterministic."""
        if not text:
            return text
        digest = self._digest("text", text, size=16)
        rng = random.Random(int.from_bytes(digest, "big"))
        chars = list(text)
        rng.shuffle(chars)
        return "".join(chars) + digest.hex()[:_SCRAMBLE_SUFFIX_LEN]


def mask_dataset(dataset: Dataset, seed: int, variance_pct: float) -> Dataset:
    """Return a masked copy of the dataset. Same seed, same output."""
    m = Masker(seed, variance_pct)
    taxpayers = [replace(t, id=m.pseudonym(t.id), merchandise=m.scramble_text(t.merchandise))
                 for t in dataset.taxpayers]
    investors = [replace(i, id=m.pseudonym(i.id)) for i in dataset.investors]
    investments = [replace(e, investor_id=m.pseudonym(e.investor_id), investee_id=m.pseudonym(e.investee_id))
                   for e in dataset.investments]
    # Invoice ids are opaque and carry no identity, so they stay; the variance
    # factor is keyed on them, which makes re-masking reproducible per record.
    invoices = [replace(
        inv,
        seller_id=m.pseudonym(inv.seller_id),
        buyer_id=m.pseudonym(inv.buyer_id),
        amount=m.vary_amount(inv.amount, inv.invoice_id),
        vat_amount=m.vary_amount(inv.vat_amount, inv.invoice_id),
    ) for inv in dataset.invoices]
    audits = [replace(
        a,
        taxpayer_id=m.pseudonym(a.taxpayer_id),
        description=m.scramble_text(a.description),
        action_taken=m.scramble_text(a.action_taken),
    ) for a in dataset.audits]
    return Dataset(
        taxpayers=taxpayers,
        investors=investors,
        investments=investments,
        invoices=invoices,
        audits=audits,
        manifest=dataset.manifest,
        rejections=list(dataset.rejections),
        warnings=list(dataset.warnings),
    )
