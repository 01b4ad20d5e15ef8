"""Synthetic tax ecosystems with planted suspicious groups and ground truth.

Planted groups come in two shapes: a single owner holding every trading company
directly (star), and an owner controlling the traders through chains of
intermediate holding entities (branched). Each group carries early setup trades
that push the designated buyer into profit and the sellers into loss, followed
by the actual related party transactions in the opposite direction, so the
effectiveness labels are known by construction.

The generator verifies every plant with its own small brute-force checks
(path-product enumeration, BFS, balance replay) rather than with the detection
engine, so tests against the engine stay non-circular.
"""

from __future__ import annotations

import calendar
import json
import math
import random
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

from .ingest import Dataset, Manifest, write_dataset
from .records import (
    AuditRecord,
    ConfigError,
    DateRange,
    InvestmentEdge,
    InvestorProfile,
    Invoice,
    TaxpayerProfile,
)

VAT_RATE = 0.13
INDUSTRIES = ["manufacturing", "wholesale", "retail", "construction", "services", "mining"]
REGIONS = ["north", "south", "east", "west", "central"]
OWNERSHIP_TYPES = ["private", "state", "foreign", "joint"]
MERCHANDISE = ["steel", "coal", "textiles", "electronics", "chemicals", "machinery", "grain"]
VIOLATIONS = ["false_invoice", "underreporting", "transfer_pricing"]


@dataclass(frozen=True)
class SynthConfig:
    n_taxpayers: int
    n_investors: int
    n_invoices: int
    date_start: date
    date_end: date
    n_planted_groups: int = 0
    planted_depth: int = 2
    month_end_bias: float = 0.3
    seed: int = 0

    def __post_init__(self):
        for name in ("n_taxpayers", "n_investors", "n_invoices", "n_planted_groups"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0")
        if self.date_start > self.date_end:
            raise ConfigError("date_start is after date_end")
        if self.planted_depth < 1:
            raise ConfigError("planted_depth must be >= 1")
        if not (0.0 <= self.month_end_bias <= 1.0):
            raise ConfigError("month_end_bias must be in [0, 1]")
        if self.n_planted_groups > 0 and self.n_investors < self.n_planted_groups:
            raise ConfigError("planted groups require n_investors >= n_planted_groups")


@dataclass
class PlantedGroup:
    owner_id: str
    member_ids: tuple[str, ...]
    taxpayer_ids: tuple[str, ...]
    rpt_invoice_ids: tuple[str, ...]
    effective_invoice_ids: tuple[str, ...]


@dataclass
class GroundTruth:
    groups: list[PlantedGroup]
    recommended_max_txn_chain: int
    recommended_max_ctrl_chain: int
    recommended_min_ratio: float = 0.10

    def write_jsonl(self, path):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", encoding="utf-8") as fh:
            fh.write(json.dumps({
                "record": "params",
                "max_txn_chain": self.recommended_max_txn_chain,
                "max_ctrl_chain": self.recommended_max_ctrl_chain,
                "min_ratio": self.recommended_min_ratio,
            }, sort_keys=True) + "\n")
            for g in self.groups:
                fh.write(json.dumps({
                    "record": "group",
                    "owner_id": g.owner_id,
                    "member_ids": list(g.member_ids),
                    "taxpayer_ids": list(g.taxpayer_ids),
                    "rpt_invoice_ids": list(g.rpt_invoice_ids),
                    "effective_invoice_ids": list(g.effective_invoice_ids),
                }, sort_keys=True) + "\n")

    @classmethod
    def read_jsonl(cls, path):
        groups, params = [], {}
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            rec = json.loads(line)
            if rec["record"] == "params":
                params = rec
            else:
                groups.append(PlantedGroup(
                    owner_id=rec["owner_id"],
                    member_ids=tuple(rec["member_ids"]),
                    taxpayer_ids=tuple(rec["taxpayer_ids"]),
                    rpt_invoice_ids=tuple(rec["rpt_invoice_ids"]),
                    effective_invoice_ids=tuple(rec["effective_invoice_ids"]),
                ))
        return cls(groups=groups,
                   recommended_max_txn_chain=params.get("max_txn_chain", 4),
                   recommended_max_ctrl_chain=params.get("max_ctrl_chain", 4),
                   recommended_min_ratio=params.get("min_ratio", 0.10))


def _month_end_split(window: DateRange) -> tuple[list[date], list[date]]:
    """Days in the window split into (last-5-of-month, the rest)."""
    tail, body = [], []
    for d in window.days():
        dim = calendar.monthrange(d.year, d.month)[1]
        (tail if d.day > dim - 5 else body).append(d)
    return tail, body


def _biased_date(rng: random.Random, tail: list[date], body: list[date], bias: float) -> date:
    if tail and (not body or rng.random() < bias):
        return rng.choice(tail)
    if body:
        return rng.choice(body)
    return rng.choice(tail)


@dataclass
class _Plant:
    """Working state for one planted group during generation."""

    owner_id: str
    buyer_id: str
    seller_ids: list[str]
    members: set[str] = field(default_factory=set)
    edges: list[InvestmentEdge] = field(default_factory=list)
    depth_of: dict[str, int] = field(default_factory=dict)  # taxpayer -> chain hops from owner
    invoices: list[Invoice] = field(default_factory=list)
    effective_ids: list[str] = field(default_factory=list)


def generate(config: SynthConfig, out_dir=None) -> tuple[Dataset, GroundTruth]:
    """Generate a dataset and its ground truth; write files when out_dir is given."""
    rng = random.Random(config.seed)
    period = DateRange(config.date_start, config.date_end)
    if config.n_planted_groups > 0 and period.n_days < 20:
        raise ConfigError("planted groups need a period of at least 20 days")

    taxpayer_ids = [f"T{i:06d}" for i in range(1, config.n_taxpayers + 1)]
    investor_ids = [f"P{i:06d}" for i in range(1, config.n_investors + 1)]
    next_taxpayer = iter(taxpayer_ids)
    next_investor = iter(investor_ids)
    invoice_seq = [0]

    def new_invoice(day: date, seller: str, buyer: str, amount: float) -> Invoice:
        invoice_seq[0] += 1
        return Invoice(
            invoice_id=f"INV{invoice_seq[0]:07d}",
            date=day,
            seller_id=seller,
            buyer_id=buyer,
            amount=round(amount, 2),
            vat_amount=round(amount * VAT_RATE, 2),
        )

    setup_end = period.day(int(0.35 * (period.n_days - 1)))
    rpt_start = period.day(min(period.n_days - 1, int(math.ceil(0.45 * (period.n_days - 1)))))
    setup_tail, setup_body = _month_end_split(DateRange(period.start, setup_end))
    rpt_tail, rpt_body = _month_end_split(DateRange(rpt_start, period.end))
    full_tail, full_body = _month_end_split(period)

    plants: list[_Plant] = []
    used_investors = 0
    for g in range(config.n_planted_groups):
        branched = (g % 2 == 1) and config.planted_depth > 1
        want = rng.randint(3, 5) if branched else rng.randint(2, 4)
        group_taxpayers = []
        for _ in range(want):
            tid = next(next_taxpayer, None)
            if tid is None:
                break
            group_taxpayers.append(tid)
        if len(group_taxpayers) < 2:
            raise ConfigError("not enough taxpayers left to plant the requested groups")
        owner = next(next_investor, None)
        if owner is None:
            raise ConfigError("not enough investors left to plant the requested groups")
        used_investors += 1

        plant = _Plant(owner_id=owner, buyer_id=group_taxpayers[0],
                       seller_ids=group_taxpayers[1:])
        plant.members.update([owner, *group_taxpayers])
        for tid in group_taxpayers:
            depth = rng.randint(1, config.planted_depth) if branched else 1
            lo = max(0.5, 0.15 ** (1.0 / depth) + 0.02)
            chain = [owner]
            for _ in range(depth - 1):
                mid = next(next_investor, None)
                if mid is None:
                    break
                used_investors += 1
                chain.append(mid)
                plant.members.add(mid)
            depth = len(chain)  # shrinks if the investor budget ran out
            chain.append(tid)
            for src, dst in zip(chain, chain[1:]):
                plant.edges.append(InvestmentEdge(
                    investor_id=src, investee_id=dst,
                    amount=round(rng.uniform(1e5, 5e6), 2),
                    share_ratio=round(rng.uniform(lo, 0.95), 6)))
            plant.depth_of[tid] = depth

        for seller in plant.seller_ids:
            for _ in range(rng.randint(2, 3)):
                day = _biased_date(rng, setup_tail, setup_body, config.month_end_bias)
                plant.invoices.append(new_invoice(day, plant.buyer_id, seller,
                                                  rng.uniform(5000, 20000)))
            for _ in range(rng.randint(2, 4)):
                day = _biased_date(rng, rpt_tail, rpt_body, config.month_end_bias)
                inv = new_invoice(day, seller, plant.buyer_id, rng.uniform(50, 800))
                plant.invoices.append(inv)
                plant.effective_ids.append(inv.invoice_id)
        plants.append(plant)

    planted_invoice_count = sum(len(p.invoices) for p in plants)
    if planted_invoice_count > config.n_invoices:
        raise ConfigError(
            f"n_invoices={config.n_invoices} cannot hold {planted_invoice_count} planted invoices")

    background_taxpayers = list(next_taxpayer)
    background_investors = list(next_investor)

    investments: list[InvestmentEdge] = [e for p in plants for e in p.edges]
    for inv_id in background_investors:
        if rng.random() < 0.6 and background_taxpayers:
            for tid in rng.sample(background_taxpayers,
                                  k=min(rng.randint(1, 3), len(background_taxpayers))):
                investments.append(InvestmentEdge(
                    investor_id=inv_id, investee_id=tid,
                    amount=round(rng.uniform(1e4, 1e6), 2),
                    share_ratio=round(rng.uniform(0.03, 0.95), 6)))

    invoices: list[Invoice] = [inv for p in plants for inv in p.invoices]
    n_noise = config.n_invoices - planted_invoice_count
    if n_noise > 0 and len(background_taxpayers) < 2:
        raise ConfigError("background noise invoices need at least 2 non-planted taxpayers")
    for _ in range(n_noise):
        seller, buyer = rng.sample(background_taxpayers, 2)
        day = _biased_date(rng, full_tail, full_body, config.month_end_bias)
        invoices.append(new_invoice(day, seller, buyer, rng.uniform(20, 50000)))
    invoices.sort(key=lambda i: (i.date, i.invoice_id))

    taxpayers = [TaxpayerProfile(
        id=tid,
        industry=rng.choice(INDUSTRIES),
        ownership_type=rng.choice(OWNERSHIP_TYPES),
        region=rng.choice(REGIONS),
        merchandise=rng.choice(MERCHANDISE),
    ) for tid in taxpayer_ids]
    investors = [InvestorProfile(
        id=pid, entity_kind=rng.choice(["person", "organization"]),
    ) for pid in investor_ids]

    audits: list[AuditRecord] = []
    planted_taxpayers = {tid for p in plants for tid in (p.buyer_id, *p.seller_ids)}
    for tid in taxpayer_ids:
        flagged = rng.random() < (0.5 if tid in planted_taxpayers else 0.05)
        if flagged:
            for _ in range(rng.randint(1, 2)):
                audits.append(AuditRecord(
                    taxpayer_id=tid,
                    audit_date=rng.choice(full_tail + full_body),
                    violation_type=rng.choice(VIOLATIONS),
                    description="confirmed irregular filings",
                    action_taken="penalty assessed",
                    tax_payable=round(rng.uniform(1e3, 1e5), 2),
                ))
    audits.sort(key=lambda a: (a.taxpayer_id, a.audit_date))

    dataset = Dataset(
        taxpayers=taxpayers,
        investors=investors,
        investments=investments,
        invoices=invoices,
        audits=audits,
        manifest=Manifest(date_start=config.date_start, date_end=config.date_end),
    )

    max_pair_distance = 1
    max_ctrl_distance = 1
    for p in plants:
        depths = p.depth_of
        for seller in p.seller_ids:
            max_pair_distance = max(max_pair_distance, depths[p.buyer_id] + depths[seller])
        max_ctrl_distance = max(max_ctrl_distance, max(depths.values()))
    truth = GroundTruth(
        groups=[PlantedGroup(
            owner_id=p.owner_id,
            member_ids=tuple(sorted(p.members)),
            taxpayer_ids=tuple(sorted((p.buyer_id, *p.seller_ids))),
            rpt_invoice_ids=tuple(sorted(i.invoice_id for i in p.invoices)),
            effective_invoice_ids=tuple(sorted(p.effective_ids)),
        ) for p in plants],
        recommended_max_txn_chain=max_pair_distance,
        recommended_max_ctrl_chain=max_ctrl_distance,
    )

    _verify_plants(plants, truth)

    if out_dir is not None:
        out_dir = Path(out_dir)
        write_dataset(out_dir, dataset)
        truth.write_jsonl(out_dir / "ground_truth.jsonl")
    return dataset, truth


# --- independent plant verification ------------------------------------------
# Deliberately separate from the network/fusion modules: plain enumeration only.

def _all_path_products(edges: list[InvestmentEdge], src: str, dst: str) -> float:
    """Max ratio product over simple paths, by exhaustive DFS."""
    if src == dst:
        return 1.0
    out: dict[str, list[tuple[str, float]]] = {}
    for e in edges:
        out.setdefault(e.investor_id, []).append((e.investee_id, e.share_ratio))
    best = 0.0
    stack = [(src, 1.0, {src})]
    while stack:
        cur, prod, seen = stack.pop()
        for nxt, r in out.get(cur, []):
            if nxt == dst:
                best = max(best, prod * r)
            elif nxt not in seen:
                stack.append((nxt, prod * r, seen | {nxt}))
    return best


def _bfs_distance(edges: list[InvestmentEdge], a: str, b: str) -> int:
    adj: dict[str, set[str]] = {}
    for e in edges:
        adj.setdefault(e.investor_id, set()).add(e.investee_id)
        adj.setdefault(e.investee_id, set()).add(e.investor_id)
    frontier, seen, hops = {a}, {a}, 0
    while frontier:
        if b in frontier:
            return hops
        frontier = {n for cur in frontier for n in adj.get(cur, ()) if n not in seen}
        seen |= frontier
        hops += 1
    raise AssertionError(f"planted nodes {a} and {b} are disconnected")


def _verify_plants(plants: list[_Plant], truth: GroundTruth):
    for p in plants:
        for tid in (p.buyer_id, *p.seller_ids):
            ratio = _all_path_products(p.edges, p.owner_id, tid)
            if ratio < truth.recommended_min_ratio:
                raise AssertionError(
                    f"planted owner {p.owner_id} holds only {ratio:.4f} over {tid}")
        for seller in p.seller_ids:
            hops = _bfs_distance(p.edges, p.buyer_id, seller)
            if hops > truth.recommended_max_txn_chain:
                raise AssertionError("planted trading pair exceeds the recommended chain length")

        # Effectiveness reads balances as of the end of the previous day, so the
        # replay applies each day's flows only after classifying that day.
        balances: dict[str, int] = {}
        effective = set(p.effective_ids)
        by_day: dict[date, list[Invoice]] = {}
        for inv in p.invoices:
            by_day.setdefault(inv.date, []).append(inv)
        for day in sorted(by_day):
            for inv in by_day[day]:
                is_eff = balances.get(inv.buyer_id, 0) > 0 and balances.get(inv.seller_id, 0) < 0
                if is_eff != (inv.invoice_id in effective):
                    raise AssertionError(f"planted invoice {inv.invoice_id} effectiveness mismatch")
            for inv in by_day[day]:
                cents = int(round(inv.amount * 100))
                balances[inv.seller_id] = balances.get(inv.seller_id, 0) + cents
                balances[inv.buyer_id] = balances.get(inv.buyer_id, 0) - cents
