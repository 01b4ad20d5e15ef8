"""Independent brute-force reference implementations for checking the engine.

Everything here favors obviousness over speed: exhaustive simple-path
enumeration, plain BFS, per-day replay. These functions only consume plain
ids, tuples and the frozen record types, never the engine's network classes,
so an engine bug cannot leak into its own check.
"""

from __future__ import annotations

from collections import deque
from datetime import timedelta


def max_product_simple_paths(edges, src, dst):
    """Max ratio product over simple directed paths; edges are (a, b, ratio).

    Convention: the empty path gives ratio 1.0 from a node to itself.
    """
    if src == dst:
        return 1.0
    out = {}
    for a, b, r in edges:
        out.setdefault(a, []).append((b, r))
    best = 0.0
    stack = [(src, 1.0, frozenset([src]))]
    while stack:
        node, prod, seen = stack.pop()
        for nxt, r in out.get(node, ()):
            if nxt == dst:
                best = max(best, prod * r)
            elif nxt not in seen:
                stack.append((nxt, prod * r, seen | {nxt}))
    return best


def enumerate_simple_paths(edges, src, dst):
    """All simple directed paths as node tuples, with their ratio products."""
    out = {}
    for a, b, r in edges:
        out.setdefault(a, []).append((b, r))
    results = []
    stack = [((src,), 1.0)]
    while stack:
        path, prod = stack.pop()
        for nxt, r in out.get(path[-1], ()):
            if nxt == dst:
                results.append((path + (nxt,), prod * r))
            elif nxt not in path:
                stack.append((path + (nxt,), prod * r))
    return results


def best_path_with_ties(edges, src, dst):
    """Max product, then fewest hops, then lexicographically smallest nodes."""
    paths = enumerate_simple_paths(edges, src, dst)
    if not paths:
        return None
    return min(paths, key=lambda pr: (-pr[1], len(pr[0]), pr[0]))[0]


def undirected_adjacency(edges):
    adj = {}
    for a, b, *_ in edges:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    return adj


def bfs_distance(edges, a, b):
    """Undirected hop distance over (a, b, ...) edge tuples; None if disconnected."""
    if a == b:
        return 0
    adj = undirected_adjacency(edges)
    seen = {a}
    frontier = {a}
    hops = 0
    while frontier:
        hops += 1
        frontier = {n for cur in frontier for n in adj.get(cur, ()) if n not in seen}
        if b in frontier:
            return hops
        seen |= frontier
    return None


def multi_source_distances(edges, sources):
    adj = undirected_adjacency(edges)
    dist = {s: 0 for s in sources}
    queue = deque(sorted(dist))
    while queue:
        cur = queue.popleft()
        for nxt in adj.get(cur, ()):
            if nxt not in dist:
                dist[nxt] = dist[cur] + 1
                queue.append(nxt)
    return dist


def weak_components(all_nodes, edges):
    """Maps node -> frozenset of its weakly connected component."""
    adj = undirected_adjacency(edges)
    assignment = {}
    for start in sorted(all_nodes):
        if start in assignment:
            continue
        members = {start}
        queue = deque([start])
        while queue:
            cur = queue.popleft()
            for nxt in adj.get(cur, ()):
                if nxt in members:
                    continue
                members.add(nxt)
                queue.append(nxt)
        comp = frozenset(members)
        for m in members:
            assignment[m] = comp
    return assignment


def qualifying_owners(kinds, edges, buyer, seller, min_ratio):
    """Investor-kind nodes whose exhaustive-path ratio reaches both traders."""
    owners = set()
    for nid, kind in kinds.items():
        if kind not in ("investor", "both"):
            continue
        if (max_product_simple_paths(edges, nid, buyer) >= min_ratio
                and max_product_simple_paths(edges, nid, seller) >= min_ratio):
            owners.add(nid)
    return owners


def brute_force_detect(kinds, edges, invoices, period_start, period_end,
                       max_txn_chain, max_ctrl_chain, min_ratio):
    """Reference group detection by exhaustive per-invoice testing.

    kinds: id -> "taxpayer" | "investor" | "both", the full (pruned) node set.
    edges: (investor, investee, ratio) tuples.
    invoices: the trade-network invoice records.
    Returns {frozenset(member ids): {"invoices": frozenset, "chain": {...},
    "owners": {...}}}.
    """
    comp = weak_components(kinds.keys(), edges)
    fused = []
    for inv in invoices:
        if not (period_start <= inv.date <= period_end):
            continue
        if comp[inv.seller_id] != comp[inv.buyer_id]:
            continue
        hops = bfs_distance(edges, inv.seller_id, inv.buyer_id)
        if hops is None or hops > max_txn_chain:
            continue
        owners = qualifying_owners(kinds, edges, inv.buyer_id, inv.seller_id, min_ratio)
        if not owners:
            continue
        fused.append((inv, hops, frozenset(owners)))
    if not fused:
        return {}

    transacting = {i.seller_id for i, _, _ in fused} | {i.buyer_id for i, _, _ in fused}
    dist = multi_source_distances(edges, transacting)
    kept = {nid for nid, d in dist.items() if d <= max_ctrl_chain}

    kept_edges = [(a, b, r) for a, b, r in edges if a in kept and b in kept]
    fused_pairs = [(i.seller_id, i.buyer_id, None) for i, _, _ in fused]
    comp_after = weak_components(kept, kept_edges + fused_pairs)

    groups = {}
    for inv, hops, owners in fused:
        members = comp_after[inv.seller_id]
        entry = groups.setdefault(members, {"invoices": set(), "chain": {}, "owners": {}})
        entry["invoices"].add(inv.invoice_id)
        entry["chain"][inv.invoice_id] = hops
        entry["owners"][inv.invoice_id] = owners
    return {members: {"invoices": frozenset(e["invoices"]),
                      "chain": dict(e["chain"]),
                      "owners": dict(e["owners"])}
            for members, e in groups.items()}


def replay_daily_balances(invoices, taxpayer_id, period_start, period_end):
    """Per-day cumulative cents for one taxpayer, by literal day-by-day replay."""
    n_days = (period_end - period_start).days + 1
    values = []
    running = 0
    for i in range(n_days):
        day = period_start + timedelta(days=i)
        for inv in invoices:
            if inv.date != day:
                continue
            cents = int(round(inv.amount * 100))
            if inv.seller_id == taxpayer_id:
                running += cents
            elif inv.buyer_id == taxpayer_id:
                running -= cents
        values.append(running)
    return values
