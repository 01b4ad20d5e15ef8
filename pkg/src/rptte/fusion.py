"""Fusing trade edges into the ownership network to detect suspicious groups.

An invoice is fused when its buyer and seller sit in the same weak component,
their undirected distance is within the transaction chain bound, and at least
one investor holds a qualifying final investment ratio over both ends. Fused
components become candidate groups; nodes too far from any transacting
taxpayer are cut first, and components without a single fused invoice are
discarded.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import date

from .network import TaxpayerNetwork, TradeNetwork
from .records import ConfigError, InvestmentEdge, Invoice, UnknownEntityError

DEFAULT_MIN_RATIO = 0.10
SORTABLE_FEATURES = ("effective_rpts", "rpt_amount", "evasion_taxpayers")


@dataclass(frozen=True)
class FusionParams:
    period_start: date
    period_end: date
    max_txn_chain: int = 4
    max_ctrl_chain: int = 4
    min_ratio: float = DEFAULT_MIN_RATIO

    def __post_init__(self):
        if self.period_start > self.period_end:
            raise ConfigError("period_start is after period_end")
        if self.max_txn_chain < 1:
            raise ConfigError("max_txn_chain must be >= 1")
        if self.max_ctrl_chain < 1:
            raise ConfigError("max_ctrl_chain must be >= 1")
        if not (0.0 < self.min_ratio <= 1.0):
            raise ConfigError("min_ratio must be in (0, 1]")

    def cache_key(self) -> str:
        return json.dumps({
            "period_start": self.period_start.isoformat(),
            "period_end": self.period_end.isoformat(),
            "max_txn_chain": self.max_txn_chain,
            "max_ctrl_chain": self.max_ctrl_chain,
            "min_ratio": self.min_ratio,
        }, sort_keys=True)


@dataclass
class RelatedPartyTransaction:
    invoice: Invoice
    chain_length: int
    common_owners: tuple[str, ...]
    effective: bool = False


@dataclass
class RptteGroup:
    group_id: str
    node_ids: tuple[str, ...]
    taxpayer_ids: tuple[str, ...]
    investment_edges: tuple[InvestmentEdge, ...]
    rpts: list[RelatedPartyTransaction]
    features: "GroupFeatures | None" = field(default=None)  # filled by the features pass

    def rpt_invoice_ids(self) -> list[str]:
        return sorted(r.invoice.invoice_id for r in self.rpts)


def group_id_for(node_ids) -> str:
    """Content hash of the member set, stable across runs with equal inputs."""
    digest = hashlib.sha256("\n".join(sorted(node_ids)).encode()).hexdigest()
    return digest[:16]


def common_beneficial_owners(net: TaxpayerNetwork, buyer_id: str, seller_id: str,
                             min_ratio: float = DEFAULT_MIN_RATIO) -> set[str]:
    """Investor nodes holding at least min_ratio final ratio over both traders.

    A trading company that itself owns the counterparty qualifies: its ratio
    over itself is 1 by the empty-path convention.
    """
    for nid in (buyer_id, seller_id):
        if nid not in net.nodes:
            raise UnknownEntityError(nid)
    to_buyer = net.max_ratio_to(buyer_id)
    to_seller = net.max_ratio_to(seller_id)
    owners = set()
    for nid, ratio in to_buyer.items():
        if ratio >= min_ratio and to_seller.get(nid, 0.0) >= min_ratio and net.nodes[nid].is_investor:
            owners.add(nid)
    return owners


def ownership_chain(net: TaxpayerNetwork, owner_id: str, taxpayer_id: str) -> list[InvestmentEdge]:
    """The edge path realizing the owner's final ratio over the taxpayer."""
    return net.best_ratio_path(owner_id, taxpayer_id)


class _UnionFind:
    def __init__(self, items):
        self.parent = {i: i for i in items}

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[rb] = ra


def detect_groups(net: TaxpayerNetwork, trade: TradeNetwork,
                  params: FusionParams) -> list[RptteGroup]:
    """Run network fusion and return suspicious groups sorted by group id."""
    owner_cache: dict[str, dict[str, float]] = {}

    def qualified_owners(taxpayer: str) -> set[str]:
        if taxpayer not in owner_cache:
            ratios = net.max_ratio_to(taxpayer)
            owner_cache[taxpayer] = {
                nid: r for nid, r in ratios.items()
                if r >= params.min_ratio and net.nodes[nid].is_investor
            }
        return set(owner_cache[taxpayer])

    distance_cache: dict[tuple[str, str], int | None] = {}

    def distance(a: str, b: str) -> int | None:
        key = (a, b) if a <= b else (b, a)
        if key not in distance_cache:
            distance_cache[key] = net.undirected_distance(a, b, cutoff=params.max_txn_chain)
        return distance_cache[key]

    fused: list[RelatedPartyTransaction] = []
    for seller, buyer in trade.pairs():
        in_period = [inv for inv in trade.edges[(seller, buyer)]
                     if params.period_start <= inv.date <= params.period_end]
        if not in_period:
            continue
        if net.component_index.get(seller) != net.component_index.get(buyer):
            continue
        hops = distance(seller, buyer)
        if hops is None or hops > params.max_txn_chain:
            continue
        owners = qualified_owners(buyer) & qualified_owners(seller)
        if not owners:
            continue
        owner_key = tuple(sorted(owners))
        for inv in in_period:
            fused.append(RelatedPartyTransaction(invoice=inv, chain_length=hops,
                                                 common_owners=owner_key))

    if not fused:
        return []

    transacting = {r.invoice.seller_id for r in fused} | {r.invoice.buyer_id for r in fused}
    reach = net.distances_from(transacting)
    kept = {nid for nid, d in reach.items() if d <= params.max_ctrl_chain}

    uf = _UnionFind(sorted(kept))
    for edge in net.edges:
        if edge.investor_id in kept and edge.investee_id in kept:
            uf.union(edge.investor_id, edge.investee_id)
    for rpt in fused:
        uf.union(rpt.invoice.seller_id, rpt.invoice.buyer_id)

    members: dict[str, list[str]] = {}
    for nid in sorted(kept):
        members.setdefault(uf.find(nid), []).append(nid)
    rpts_by_root: dict[str, list[RelatedPartyTransaction]] = {}
    for rpt in fused:
        rpts_by_root.setdefault(uf.find(rpt.invoice.seller_id), []).append(rpt)

    groups = []
    for root, node_ids in members.items():
        rpts = rpts_by_root.get(root)
        if not rpts:
            continue
        rpts.sort(key=lambda r: (r.invoice.date, r.invoice.invoice_id))
        node_set = set(node_ids)
        edges = tuple(sorted(
            (e for e in net.edges if e.investor_id in node_set and e.investee_id in node_set),
            key=lambda e: (e.investor_id, e.investee_id, -e.share_ratio, e.amount)))
        groups.append(RptteGroup(
            group_id=group_id_for(node_ids),
            node_ids=tuple(sorted(node_ids)),
            taxpayer_ids=tuple(sorted(n for n in node_ids if net.nodes[n].is_taxpayer)),
            investment_edges=edges,
            rpts=rpts,
        ))
    groups.sort(key=lambda g: g.group_id)
    return groups
