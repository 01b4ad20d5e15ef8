"""Taxpayer (ownership) network and trade network construction plus pruning.

The ownership graph is directed investor -> investee with a share ratio on each
edge. The final investment ratio between two entities is the maximum over
directed paths of the product of edge ratios. Because every ratio is <= 1 the
product never grows along a path, so a best-first search that settles each node
once computes exactly the simple-path maximum, cycles included (a cycle
multiplies by <= 1 and cannot improve on the first settlement).
"""

from __future__ import annotations

import heapq
import json
import logging
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

from .records import (
    AuditRecord,
    InvestmentEdge,
    InvestorProfile,
    Invoice,
    PathNotFoundError,
    TaxpayerProfile,
    UnknownEntityError,
)

log = logging.getLogger(__name__)

KIND_TAXPAYER = "taxpayer"
KIND_INVESTOR = "investor"
KIND_BOTH = "both"

PRUNE_BELOW_MIN_RATIO = "final investment ratio below threshold for every reachable taxpayer"
PRUNE_SINGLE_TAXPAYER = "component contains at most one taxpayer"


@dataclass
class EntityNode:
    id: str
    kind: str
    has_evasion_record: bool = False
    taxpayer_profile: TaxpayerProfile | None = None
    investor_profile: InvestorProfile | None = None
    synthetic: bool = False

    @property
    def is_taxpayer(self) -> bool:
        return self.kind in (KIND_TAXPAYER, KIND_BOTH)

    @property
    def is_investor(self) -> bool:
        return self.kind in (KIND_INVESTOR, KIND_BOTH)


class TaxpayerNetwork:
    """Immutable-after-build ownership network with adjacency indexes.

    component_index maps every node to the smallest node id of its weakly
    connected component, which makes component identity stable across runs.
    prune_log records why a node was dropped by the pruning pass that produced
    this network (empty for unpruned networks).
    """

    def __init__(self, nodes: dict[str, EntityNode], edges: list[InvestmentEdge],
                 prune_log: dict[str, str] | None = None):
        self.nodes = nodes
        self.edges = edges
        self.prune_log = prune_log or {}
        # Best ratio and best edge per ordered pair; parallel edges collapse to the max.
        self._out: dict[str, dict[str, float]] = {}
        self._in: dict[str, dict[str, float]] = {}
        self._best_edge: dict[tuple[str, str], InvestmentEdge] = {}
        self._undirected: dict[str, list[str]] = {}
        for edge in edges:
            if edge.investor_id not in nodes or edge.investee_id not in nodes:
                raise UnknownEntityError(f"edge endpoint missing from node set: {edge}")
            src, dst = edge.investor_id, edge.investee_id
            best = self._out.setdefault(src, {})
            if edge.share_ratio > best.get(dst, 0.0):
                best[dst] = edge.share_ratio
                self._best_edge[(src, dst)] = edge
            rev = self._in.setdefault(dst, {})
            if edge.share_ratio > rev.get(src, 0.0):
                rev[src] = edge.share_ratio
        neighbor_sets: dict[str, set[str]] = {nid: set() for nid in nodes}
        for edge in edges:
            neighbor_sets[edge.investor_id].add(edge.investee_id)
            neighbor_sets[edge.investee_id].add(edge.investor_id)
        self._undirected = {nid: sorted(ns) for nid, ns in neighbor_sets.items()}
        self.component_index = self._compute_components()

    def _compute_components(self) -> dict[str, str]:
        index: dict[str, str] = {}
        for start in sorted(self.nodes):
            if start in index:
                continue
            members = []
            queue = deque([start])
            seen = {start}
            while queue:
                cur = queue.popleft()
                members.append(cur)
                for nxt in self._undirected[cur]:
                    if nxt not in seen:
                        seen.add(nxt)
                        queue.append(nxt)
            label = min(members)
            for m in members:
                index[m] = label
        return index

    # --- lookups ---------------------------------------------------------

    def __contains__(self, node_id: str) -> bool:
        return node_id in self.nodes

    def node(self, node_id: str) -> EntityNode:
        try:
            return self.nodes[node_id]
        except KeyError:
            raise UnknownEntityError(node_id) from None

    def taxpayer_ids(self) -> list[str]:
        return sorted(nid for nid, n in self.nodes.items() if n.is_taxpayer)

    def pure_investor_ids(self) -> list[str]:
        return sorted(nid for nid, n in self.nodes.items() if n.kind == KIND_INVESTOR)

    def out_ratios(self, node_id: str) -> dict[str, float]:
        return self._out.get(node_id, {})

    def in_ratios(self, node_id: str) -> dict[str, float]:
        return self._in.get(node_id, {})

    def best_edge(self, src: str, dst: str) -> InvestmentEdge:
        return self._best_edge[(src, dst)]

    def neighbors(self, node_id: str) -> list[str]:
        return self._undirected.get(node_id, [])

    # --- traversal -------------------------------------------------------

    def undirected_distance(self, a: str, b: str, cutoff: int | None = None) -> int | None:
        """Hop count of the shortest undirected path over investment edges."""
        if a not in self.nodes or b not in self.nodes:
            raise UnknownEntityError(a if a not in self.nodes else b)
        if a == b:
            return 0
        seen = {a: 0}
        queue = deque([a])
        while queue:
            cur = queue.popleft()
            depth = seen[cur]
            if cutoff is not None and depth >= cutoff:
                continue
            for nxt in self._undirected[cur]:
                if nxt in seen:
                    continue
                seen[nxt] = depth + 1
                if nxt == b:
                    return depth + 1
                queue.append(nxt)
        return None

    def distances_from(self, sources: set[str]) -> dict[str, int]:
        """Multi-source undirected BFS distances."""
        dist = {s: 0 for s in sources if s in self.nodes}
        queue = deque(sorted(dist))
        while queue:
            cur = queue.popleft()
            for nxt in self._undirected[cur]:
                if nxt not in dist:
                    dist[nxt] = dist[cur] + 1
                    queue.append(nxt)
        return dist

    def max_ratio_from(self, source: str, target: str | None = None) -> dict[str, float]:
        """Best-first max-product ratios from source to every reachable node.

        Settling a node once is exact because edge ratios are <= 1 (see module
        docstring). With target given, stops early once it is settled.
        """
        ratios: dict[str, float] = {}
        heap: list[tuple[float, str]] = [(-1.0, source)]
        while heap:
            neg, cur = heapq.heappop(heap)
            if cur in ratios:
                continue
            ratios[cur] = -neg
            if cur == target:
                break
            for nxt, r in self._out.get(cur, {}).items():
                if nxt not in ratios:
                    heapq.heappush(heap, (neg * r, nxt))
        return ratios

    def max_ratio_to(self, target: str) -> dict[str, float]:
        """ratio(v, target) for every v, via the reversed graph."""
        ratios: dict[str, float] = {}
        heap: list[tuple[float, str]] = [(-1.0, target)]
        while heap:
            neg, cur = heapq.heappop(heap)
            if cur in ratios:
                continue
            ratios[cur] = -neg
            for prev, r in self._in.get(cur, {}).items():
                if prev not in ratios:
                    heapq.heappush(heap, (neg * r, prev))
        return ratios

    def max_ratio_to_any_taxpayer(self) -> dict[str, float]:
        """For every node, the best final ratio over all reachable taxpayers."""
        ratios: dict[str, float] = {}
        heap: list[tuple[float, str]] = [(-1.0, t) for t in self.taxpayer_ids()]
        heapq.heapify(heap)
        while heap:
            neg, cur = heapq.heappop(heap)
            if cur in ratios:
                continue
            ratios[cur] = -neg
            for prev, r in self._in.get(cur, {}).items():
                if prev not in ratios:
                    heapq.heappush(heap, (neg * r, prev))
        return ratios

    def best_ratio_path(self, src: str, dst: str) -> list[InvestmentEdge]:
        """The directed path realizing the maximum ratio product.

        Ties resolve to the fewest hops, then the lexicographically smallest
        node-id sequence. The search key orders exactly that way, and the
        ordering is preserved under path extension, so first settlement wins.
        """
        if src not in self.nodes or dst not in self.nodes:
            raise UnknownEntityError(src if src not in self.nodes else dst)
        settled: set[str] = set()
        heap: list[tuple[float, int, tuple[str, ...]]] = [(-1.0, 0, (src,))]
        while heap:
            neg, hops, path = heapq.heappop(heap)
            cur = path[-1]
            if cur in settled:
                continue
            settled.add(cur)
            if cur == dst:
                return [self.best_edge(u, v) for u, v in zip(path, path[1:])]
            for nxt, r in sorted(self._out.get(cur, {}).items()):
                if nxt not in settled:
                    heapq.heappush(heap, (neg * r, hops + 1, path + (nxt,)))
        raise PathNotFoundError(f"no ownership path from {src} to {dst}")


def final_investment_ratio(net: TaxpayerNetwork, investor_id: str, taxpayer_id: str) -> float:
    """Maximum product of share ratios over directed paths; 0 when unreachable."""
    if investor_id not in net.nodes:
        raise UnknownEntityError(investor_id)
    if taxpayer_id not in net.nodes:
        raise UnknownEntityError(taxpayer_id)
    if investor_id == taxpayer_id:
        return 1.0
    return net.max_ratio_from(investor_id, target=taxpayer_id).get(taxpayer_id, 0.0)


def build_taxpayer_network(taxpayers: list[TaxpayerProfile],
                           investors: list[InvestorProfile],
                           investments: list[InvestmentEdge],
                           audits: list[AuditRecord]) -> TaxpayerNetwork:
    """Fuse the profile, investment and audit records into one ownership network.

    Entities appearing only in investment rows are materialized (flagged
    synthetic) so ownership chains are not artificially broken; a node that
    only ever appears as an edge source becomes an investor, one that only
    appears as a target becomes a taxpayer, and one seen on both sides stays
    an investor.
    """
    violators = {a.taxpayer_id for a in audits if a.is_violation}
    nodes: dict[str, EntityNode] = {}
    for t in taxpayers:
        nodes[t.id] = EntityNode(id=t.id, kind=KIND_TAXPAYER, taxpayer_profile=t)
    for i in investors:
        if i.id in nodes:
            nodes[i.id].kind = KIND_BOTH
            nodes[i.id].investor_profile = i
        else:
            nodes[i.id] = EntityNode(id=i.id, kind=KIND_INVESTOR, investor_profile=i)

    as_source = {e.investor_id for e in investments}
    as_target = {e.investee_id for e in investments}
    for nid in sorted(as_source | as_target):
        if nid in nodes:
            continue
        kind = KIND_INVESTOR if nid in as_source else KIND_TAXPAYER
        nodes[nid] = EntityNode(id=nid, kind=kind, synthetic=True)
        log.warning("materialized %s node %s referenced only by investment rows", kind, nid)
    # A taxpayer-only profile with outgoing stakes is inconsistent data; it acts
    # as an investor regardless, so promote it rather than break the chain.
    for nid in sorted(as_source):
        if nodes[nid].kind == KIND_TAXPAYER:
            nodes[nid].kind = KIND_BOTH
            log.warning("taxpayer %s has outgoing investments; treating as investor too", nid)

    for nid, node in nodes.items():
        node.has_evasion_record = nid in violators
    return TaxpayerNetwork(nodes=nodes, edges=list(investments))


def prune_network(net: TaxpayerNetwork, min_ratio: float = 0.10) -> TaxpayerNetwork:
    """Apply the two pruning rules and return a new network.

    First, repeatedly remove pure investors whose final investment ratio is
    below min_ratio for every taxpayer they reach; removals can break other
    investors' qualifying paths, hence the fixpoint loop. Only then drop
    components left with at most one taxpayer, because ratio removals can split
    components.
    """
    nodes = {nid: node for nid, node in net.nodes.items()}
    edges = list(net.edges)
    removed: dict[str, str] = {}

    while True:
        current = TaxpayerNetwork(nodes, edges)
        best = current.max_ratio_to_any_taxpayer()
        doomed = [nid for nid in current.pure_investor_ids()
                  if best.get(nid, 0.0) < min_ratio]
        if not doomed:
            break
        for nid in doomed:
            removed[nid] = PRUNE_BELOW_MIN_RATIO
            del nodes[nid]
        edges = [e for e in edges if e.investor_id in nodes and e.investee_id in nodes]

    survivor = TaxpayerNetwork(nodes, edges)
    taxpayer_count: dict[str, int] = {}
    for nid, node in survivor.nodes.items():
        comp = survivor.component_index[nid]
        taxpayer_count[comp] = taxpayer_count.get(comp, 0) + (1 if node.is_taxpayer else 0)
    for nid in list(nodes):
        if taxpayer_count[survivor.component_index[nid]] <= 1:
            removed[nid] = PRUNE_SINGLE_TAXPAYER
            del nodes[nid]
    edges = [e for e in edges if e.investor_id in nodes and e.investee_id in nodes]

    pruned = TaxpayerNetwork(nodes, edges, prune_log=dict(net.prune_log, **removed))
    log.info("pruned %d of %d nodes (%d ratio, %d single-taxpayer)",
             len(removed), len(net.nodes),
             sum(1 for r in removed.values() if r == PRUNE_BELOW_MIN_RATIO),
             sum(1 for r in removed.values() if r == PRUNE_SINGLE_TAXPAYER))
    return pruned


@dataclass
class TradeNetwork:
    """Invoices filtered to taxpayers of the pruned network, indexed per pair."""

    edges: dict[tuple[str, str], list[Invoice]]
    taxpayer_ids: frozenset[str]
    _touching: dict[str, list[Invoice]] = field(default_factory=dict, repr=False)

    def pairs(self) -> list[tuple[str, str]]:
        return sorted(self.edges)

    def invoices_touching(self, taxpayer_id: str) -> list[Invoice]:
        if taxpayer_id not in self.taxpayer_ids:
            raise UnknownEntityError(taxpayer_id)
        return self._touching.get(taxpayer_id, [])

    @property
    def n_invoices(self) -> int:
        return sum(len(v) for v in self.edges.values())

    def all_invoices(self):
        for pair in self.pairs():
            yield from self.edges[pair]


def build_trade_network(invoices: list[Invoice], pruned_net: TaxpayerNetwork) -> TradeNetwork:
    """Keep invoices whose both endpoints are taxpayers of the pruned network."""
    taxpayers = frozenset(pruned_net.taxpayer_ids())
    edges: dict[tuple[str, str], list[Invoice]] = {}
    touching: dict[str, list[Invoice]] = {}
    for inv in invoices:
        if inv.seller_id in taxpayers and inv.buyer_id in taxpayers:
            edges.setdefault((inv.seller_id, inv.buyer_id), []).append(inv)
    for pair in edges:
        edges[pair].sort(key=lambda i: (i.date, i.invoice_id))
    for pair in sorted(edges):
        for inv in edges[pair]:
            touching.setdefault(inv.seller_id, []).append(inv)
            touching.setdefault(inv.buyer_id, []).append(inv)
    for tid in touching:
        touching[tid].sort(key=lambda i: (i.date, i.invoice_id))
    return TradeNetwork(edges=edges, taxpayer_ids=taxpayers, _touching=touching)


def export_nodes(net: TaxpayerNetwork, path):
    """Debug dump: one JSON record per node."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for nid in sorted(net.nodes):
            node = net.nodes[nid]
            fh.write(json.dumps({"id": nid, "kind": node.kind,
                                 "evasion": node.has_evasion_record}) + "\n")


def export_edges(net: TaxpayerNetwork, path):
    """Debug dump: one JSON record per investment edge."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8") as fh:
        for e in sorted(net.edges, key=lambda e: (e.investor_id, e.investee_id, -e.share_ratio)):
            fh.write(json.dumps({"src": e.investor_id, "dst": e.investee_id,
                                 "ratio": e.share_ratio}) + "\n")
