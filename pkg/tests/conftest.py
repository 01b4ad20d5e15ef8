from __future__ import annotations

import random
from datetime import date, timedelta

import pytest

from rptte.fusion import FusionParams
from rptte.network import EntityNode, TaxpayerNetwork, build_trade_network
from rptte.records import DateRange, InvestmentEdge, Invoice


def day(offset: int, start: date = date(2014, 1, 1)) -> date:
    return start + timedelta(days=offset)


def make_net(kinds: dict[str, str], edges=(), evaders=()) -> TaxpayerNetwork:
    """Bare network from id->kind plus (investor, investee, ratio) triples."""
    nodes = {nid: EntityNode(id=nid, kind=kind, has_evasion_record=nid in evaders)
             for nid, kind in kinds.items()}
    edge_records = [InvestmentEdge(investor_id=a, investee_id=b, amount=1.0, share_ratio=r)
                    for a, b, r in edges]
    return TaxpayerNetwork(nodes=nodes, edges=edge_records)


def make_invoice(n: int, d: date, seller: str, buyer: str, amount: float,
                 vat: float = 0.0) -> Invoice:
    return Invoice(invoice_id=f"I{n:04d}", date=d, seller_id=seller, buyer_id=buyer,
                   amount=amount, vat_amount=vat)


def make_trade(invoices, taxpayers: dict[str, str] | list[str]):
    """Trade network over an edgeless net containing the given taxpayers."""
    if isinstance(taxpayers, dict):
        kinds = taxpayers
    else:
        kinds = {tid: "taxpayer" for tid in taxpayers}
    return build_trade_network(list(invoices), make_net(kinds))


def edge_triples(net: TaxpayerNetwork):
    return [(e.investor_id, e.investee_id, e.share_ratio) for e in net.edges]


def random_ownership_graph(rng: random.Random, max_nodes: int = 10):
    """Random directed ratio graph, cycles allowed, some ratios pinned to 1.0."""
    n = rng.randint(2, max_nodes)
    ids = [f"N{i}" for i in range(n)]
    edges = []
    for a in ids:
        for b in ids:
            if a == b or rng.random() > 0.25:
                continue
            ratio = 1.0 if rng.random() < 0.15 else round(rng.uniform(0.02, 1.0), 3)
            edges.append((a, b, ratio))
    return ids, edges


def random_fusion_instance(rng: random.Random):
    """Small random (net kinds, edges, invoices, params) detection instance."""
    n_tax = rng.randint(2, 8)
    n_inv = rng.randint(1, 6)
    n_both = rng.randint(0, 3)
    kinds = {}
    for i in range(n_tax):
        kinds[f"T{i}"] = "taxpayer"
    for i in range(n_inv):
        kinds[f"P{i}"] = "investor"
    for i in range(n_both):
        kinds[f"B{i}"] = "both"
    ids = sorted(kinds)
    investor_ids = [nid for nid in ids if kinds[nid] != "taxpayer"]
    taxpayer_ids = [nid for nid in ids if kinds[nid] != "investor"]

    edges = []
    for src in investor_ids:
        for dst in ids:
            if src == dst or rng.random() > 0.30:
                continue
            choices = [0.05, 0.08, 0.10, 0.15, 0.30, 0.50, 0.80, 1.0]
            edges.append((src, dst, rng.choice(choices)))

    start = date(2014, 1, 1)
    invoices = []
    for i in range(rng.randint(0, 50)):
        seller, buyer = rng.sample(taxpayer_ids, 2) if len(taxpayer_ids) >= 2 else (None, None)
        if seller is None:
            break
        invoices.append(make_invoice(i, day(rng.randint(0, 29), start), seller, buyer,
                                     amount=round(rng.uniform(1, 5000), 2)))

    p_start = day(rng.randint(0, 10), start)
    p_end = day(rng.randint(10, 29), start)
    params = FusionParams(
        period_start=min(p_start, p_end),
        period_end=max(p_start, p_end),
        max_txn_chain=rng.randint(1, 5),
        max_ctrl_chain=rng.randint(1, 4),
        min_ratio=0.10,
    )
    return kinds, edges, invoices, params


@pytest.fixture
def simple_period():
    return DateRange(date(2014, 1, 1), date(2014, 1, 5))
