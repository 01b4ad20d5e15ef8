"""HTTP API over the detection pipeline, with a parameter-keyed run cache.

The dataset is loaded once at startup and never mutated; runs are pure
functions of (dataset, params) keyed by content hash, so identical requests
coalesce onto one computation and repeated reads return identical bytes.
Configuration comes from arguments, a JSON config file, or environment
variables: RPTTE_DATA_DIR, RPTTE_LISTEN, RPTTE_CACHE_CAPACITY, RPTTE_CONFIG.
"""

from __future__ import annotations

import hashlib
import json
import os
import threading
from collections import OrderedDict
from concurrent.futures import Future
from dataclasses import dataclass
from datetime import date, datetime, timezone
from pathlib import Path
from typing import Literal

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field, model_validator

from . import features as feat
from .fusion import FusionParams, RptteGroup, detect_groups, ownership_chain
from .ingest import Dataset, load_dataset
from .network import (
    TaxpayerNetwork,
    TradeNetwork,
    build_taxpayer_network,
    build_trade_network,
    prune_network,
)
from .records import DateRange, to_cents, from_cents

API_PREFIX = "/api/v1"
DEFAULT_CACHE_CAPACITY = 32
ENV_DATA_DIR = "RPTTE_DATA_DIR"
ENV_LISTEN = "RPTTE_LISTEN"
ENV_CACHE_CAPACITY = "RPTTE_CACHE_CAPACITY"
ENV_CONFIG = "RPTTE_CONFIG"
ENV_FRONTEND_DIR = "RPTTE_FRONTEND_DIR"


# --- wire models --------------------------------------------------------------

class ErrorEnvelope(BaseModel):
    code: str
    message: str
    field_errors: dict[str, str] = Field(default_factory=dict)


class RunParamsModel(BaseModel):
    period_start: date
    period_end: date
    max_txn_chain: int = Field(default=4, ge=1)
    max_ctrl_chain: int = Field(default=4, ge=1)
    min_ratio: float = Field(default=0.10, gt=0.0, le=1.0)

    @model_validator(mode="after")
    def _ordered_period(self):
        if self.period_start > self.period_end:
            raise ValueError("period_start must not be after period_end")
        return self

    def to_params(self) -> FusionParams:
        return FusionParams(
            period_start=self.period_start,
            period_end=self.period_end,
            max_txn_chain=self.max_txn_chain,
            max_ctrl_chain=self.max_ctrl_chain,
            min_ratio=self.min_ratio,
        )


class RunHandleModel(BaseModel):
    run_id: str
    status: Literal["running", "done", "failed"]
    created_at: datetime
    n_groups: int


class DayAmountModel(BaseModel):
    date: date
    amount: float


class DailySummaryModel(BaseModel):
    start: date
    end: date
    days: list[DayAmountModel]


class FeaturesModel(BaseModel):
    n_taxpayers: int
    n_evasion_taxpayers: int
    total_rpt_amount: float
    n_rpts: int
    n_effective_rpts: int


class ArcModel(BaseModel):
    src: str  # buyer: arcs point along the cash flow
    dst: str  # seller
    amount: float
    n_invoices: int


class GroupSummaryModel(BaseModel):
    group_id: str
    features: FeaturesModel
    traders: list[str]
    arcs: list[ArcModel]


class GroupListModel(BaseModel):
    run_id: str
    total: int
    sort: str
    descending: bool
    groups: list[GroupSummaryModel]


class GraphNodeModel(BaseModel):
    id: str
    kind: Literal["taxpayer", "investor", "both"]
    has_evasion_record: bool
    profit_status: Literal["profit", "loss", "neutral"]
    layer: int


class GraphEdgeModel(BaseModel):
    src: str
    dst: str
    type: Literal["investment", "rpt"]
    weight: float
    # rpt edges only: the invoices behind the edge and their common owners,
    # so a client can open the detail view or highlight owners without math
    invoice_ids: list[str] | None = None
    common_owners: list[str] | None = None


class GraphPayloadModel(BaseModel):
    group_id: str
    nodes: list[GraphNodeModel]
    edges: list[GraphEdgeModel]


class SeriesModel(BaseModel):
    taxpayer_id: str
    start: date
    end: date
    values: list[float]
    status: Literal["profit", "loss", "neutral"]


class RptModel(BaseModel):
    invoice_id: str
    date: date
    seller_id: str
    buyer_id: str
    amount: float
    vat_amount: float
    chain_length: int
    common_owners: list[str]
    effective: bool


class DotModel(BaseModel):
    invoice_id: str
    date: date
    taxpayer_id: str
    amount: float
    direction: Literal["in", "out"]
    effect: Literal["profit", "loss"]
    paired: bool


class ArrowModel(BaseModel):
    invoice_id: str
    src_taxpayer: str  # buyer side: the arrow follows the cash flow
    dst_taxpayer: str


class ChainEdgeModel(BaseModel):
    src: str
    dst: str
    ratio: float


class OwnerModel(BaseModel):
    owner_id: str
    ratio_to_buyer: float
    ratio_to_seller: float
    chain_to_buyer: list[ChainEdgeModel]
    chain_to_seller: list[ChainEdgeModel]


class DetailModel(BaseModel):
    rpt: RptModel
    granularity: Literal["quarter", "year"]
    window_start: date
    window_end: date
    buyer: SeriesModel
    seller: SeriesModel
    dots: list[DotModel]
    arrows: list[ArrowModel]
    owners: list[OwnerModel]


class AuditModel(BaseModel):
    audit_date: date
    violation_type: str
    description: str
    action_taken: str
    tax_payable: float


class TaxpayerProfileModel(BaseModel):
    id: str
    industry: str
    ownership_type: str
    region: str
    merchandise: str


class TaxpayerLocateModel(BaseModel):
    id: str
    found: bool
    prune_reason: str | None
    kind: str | None
    profile: TaxpayerProfileModel | None
    entity_kind: str | None
    audits: list[AuditModel]
    run_id: str | None
    group_id: str | None


# --- run cache ----------------------------------------------------------------

@dataclass
class RunResult:
    run_id: str
    params: FusionParams
    groups: list[RptteGroup]
    created_at: datetime

    def group(self, group_id: str) -> RptteGroup:
        for g in self.groups:
            if g.group_id == group_id:
                return g
        raise KeyError(group_id)


class RunCache:
    """Capacity-bounded LRU; concurrent identical computations coalesce."""

    def __init__(self, capacity: int = DEFAULT_CACHE_CAPACITY):
        self.capacity = max(1, capacity)
        self._lock = threading.Lock()
        self._store: OrderedDict[str, RunResult] = OrderedDict()
        self._inflight: dict[str, Future] = {}

    def get(self, run_id: str) -> RunResult | None:
        with self._lock:
            if run_id in self._store:
                self._store.move_to_end(run_id)
                return self._store[run_id]
            return None

    def get_or_compute(self, run_id: str, factory) -> RunResult:
        with self._lock:
            if run_id in self._store:
                self._store.move_to_end(run_id)
                return self._store[run_id]
            fut = self._inflight.get(run_id)
            if fut is None:
                fut = Future()
                self._inflight[run_id] = fut
                owner = True
            else:
                owner = False
        if not owner:
            return fut.result()
        try:
            result = factory()
        except BaseException as exc:
            with self._lock:
                self._inflight.pop(run_id, None)
            fut.set_exception(exc)
            raise
        with self._lock:
            self._store[run_id] = result
            self._store.move_to_end(run_id)
            while len(self._store) > self.capacity:
                self._store.popitem(last=False)
            self._inflight.pop(run_id, None)
        fut.set_result(result)
        return result

    def __len__(self):
        with self._lock:
            return len(self._store)


# --- application state ---------------------------------------------------------

class Workbench:
    """Loaded dataset plus the immutable networks shared by all requests."""

    def __init__(self, dataset: Dataset):
        self.dataset = dataset
        self.full_net = build_taxpayer_network(
            dataset.taxpayers, dataset.investors, dataset.investments, dataset.audits)
        self.net = prune_network(self.full_net)
        self.trade = build_trade_network(dataset.invoices, self.net)
        self.fingerprint = dataset.fingerprint()
        self.profiles = {t.id: t for t in dataset.taxpayers}
        self.investor_profiles = {i.id: i for i in dataset.investors}
        self.audits_by_taxpayer: dict[str, list] = {}
        for a in dataset.audits:
            self.audits_by_taxpayer.setdefault(a.taxpayer_id, []).append(a)

    @property
    def period(self) -> DateRange:
        return self.dataset.manifest.date_range

    def run_id_for(self, params: FusionParams) -> str:
        digest = hashlib.sha256((self.fingerprint + "|" + params.cache_key()).encode())
        return digest.hexdigest()[:16]

    def compute_run(self, params: FusionParams) -> RunResult:
        groups = detect_groups(self.net, self.trade, params)
        period = DateRange(params.period_start, params.period_end)
        feat.annotate_groups(groups, self.trade, period, self.dataset.audits)
        return RunResult(
            run_id=self.run_id_for(params),
            params=params,
            groups=groups,
            created_at=datetime.now(timezone.utc),
        )

    def is_known(self, entity_id: str) -> bool:
        return (entity_id in self.full_net.nodes
                or entity_id in self.profiles
                or entity_id in self.investor_profiles)


def _group_summary(group: RptteGroup) -> GroupSummaryModel:
    f = group.features
    first_seen: dict[str, tuple[date, str]] = {}
    arcs: dict[tuple[str, str], tuple[int, int]] = {}
    for rpt in group.rpts:
        inv = rpt.invoice
        for tid in (inv.buyer_id, inv.seller_id):
            key = (inv.date, inv.invoice_id)
            if tid not in first_seen or key < first_seen[tid]:
                first_seen[tid] = key
        cents, count = arcs.get((inv.buyer_id, inv.seller_id), (0, 0))
        arcs[(inv.buyer_id, inv.seller_id)] = (cents + to_cents(inv.amount), count + 1)
    traders = sorted(first_seen, key=lambda tid: (first_seen[tid], tid))
    return GroupSummaryModel(
        group_id=group.group_id,
        features=FeaturesModel(
            n_taxpayers=f.n_taxpayers,
            n_evasion_taxpayers=f.n_evasion_taxpayers,
            total_rpt_amount=f.total_rpt_amount,
            n_rpts=f.n_rpts,
            n_effective_rpts=f.n_effective_rpts,
        ),
        traders=traders,
        arcs=[ArcModel(src=src, dst=dst, amount=from_cents(cents), n_invoices=count)
              for (src, dst), (cents, count) in sorted(arcs.items())],
    )


def _strongly_connected(node_ids: list[str], out_adj: dict[str, list[str]]) -> dict[str, int]:
    """Kosaraju condensation: maps each node to a component index."""
    order: list[str] = []
    seen: set[str] = set()
    for start in node_ids:
        if start in seen:
            continue
        stack = [(start, iter(out_adj.get(start, ())))]
        seen.add(start)
        while stack:
            node, it = stack[-1]
            advanced = False
            for nxt in it:
                if nxt not in seen:
                    seen.add(nxt)
                    stack.append((nxt, iter(out_adj.get(nxt, ()))))
                    advanced = True
                    break
            if not advanced:
                order.append(node)
                stack.pop()
    in_adj: dict[str, list[str]] = {}
    for src, dsts in out_adj.items():
        for dst in dsts:
            in_adj.setdefault(dst, []).append(src)
    comp: dict[str, int] = {}
    comp_id = 0
    for start in reversed(order):
        if start in comp:
            continue
        stack = [start]
        comp[start] = comp_id
        while stack:
            node = stack.pop()
            for prev in in_adj.get(node, ()):
                if prev not in comp:
                    comp[prev] = comp_id
                    stack.append(prev)
        comp_id += 1
    return comp


def layer_assignment(group: RptteGroup, net: TaxpayerNetwork) -> dict[str, int]:
    """Longest-path layering over investment edges, cycles collapsed first.

    Investor roots sit at layer 0 and every acyclic investment edge strictly
    increases the layer, so investees render below their investors. Taxpayers
    nobody in the group invests in are pushed below all investors.
    """
    node_ids = list(group.node_ids)
    out_adj: dict[str, list[str]] = {nid: [] for nid in node_ids}
    for e in group.investment_edges:
        out_adj[e.investor_id].append(e.investee_id)
    comp = _strongly_connected(node_ids, out_adj)

    comp_preds: dict[int, set[int]] = {c: set() for c in comp.values()}
    for src, dsts in out_adj.items():
        for dst in dsts:
            if comp[src] != comp[dst]:
                comp_preds[comp[dst]].add(comp[src])

    layer_of_comp: dict[int, int] = {}

    def layer_of(c: int) -> int:
        if c not in layer_of_comp:
            preds = comp_preds[c]
            layer_of_comp[c] = 0 if not preds else 1 + max(layer_of(p) for p in preds)
        return layer_of_comp[c]

    layers = {nid: layer_of(comp[nid]) for nid in node_ids}
    investor_layers = [layers[nid] for nid in node_ids if net.nodes[nid].is_investor]
    if investor_layers:
        floor = max(investor_layers) + 1
        for nid in node_ids:
            node = net.nodes[nid]
            if node.kind == "taxpayer" and not any(
                    e.investee_id == nid for e in group.investment_edges):
                layers[nid] = max(layers[nid], floor)
    return layers


# --- app factory ----------------------------------------------------------------

def _resolve_config(data_dir, cache_capacity, frontend_dir):
    file_cfg = {}
    cfg_path = os.environ.get(ENV_CONFIG)
    if cfg_path:
        file_cfg = json.loads(Path(cfg_path).read_text(encoding="utf-8"))
    if data_dir is None:
        data_dir = os.environ.get(ENV_DATA_DIR) or file_cfg.get("data_dir")
    if cache_capacity is None:
        raw = os.environ.get(ENV_CACHE_CAPACITY) or file_cfg.get("cache_capacity")
        cache_capacity = int(raw) if raw is not None else DEFAULT_CACHE_CAPACITY
    if frontend_dir is None:
        frontend_dir = os.environ.get(ENV_FRONTEND_DIR) or file_cfg.get("frontend_dir")
    if data_dir is None:
        raise ValueError(f"no dataset directory: pass data_dir or set {ENV_DATA_DIR}")
    return Path(data_dir), cache_capacity, frontend_dir


def create_app(data_dir=None, cache_capacity: int | None = None, frontend_dir=None,
               dataset: Dataset | None = None) -> FastAPI:
    if dataset is None:
        data_dir, cache_capacity, frontend_dir = _resolve_config(
            data_dir, cache_capacity, frontend_dir)
        dataset = load_dataset(data_dir)
    else:
        cache_capacity = cache_capacity or DEFAULT_CACHE_CAPACITY
    bench = Workbench(dataset)
    cache = RunCache(capacity=cache_capacity or DEFAULT_CACHE_CAPACITY)

    app = FastAPI(
        title="rptte service",
        version="1.0.0",
        description="Detection and exploration API for related-party-transaction "
                    "tax evasion groups.",
    )
    app.state.bench = bench
    app.state.cache = cache

    @app.exception_handler(RequestValidationError)
    async def _validation_error(request: Request, exc: RequestValidationError):
        field_errors = {}
        for err in exc.errors():
            loc = ".".join(str(p) for p in err["loc"] if p not in ("body",))
            field_errors[loc or "body"] = err["msg"]
        envelope = ErrorEnvelope(code="invalid_params",
                                 message="request validation failed",
                                 field_errors=field_errors)
        return JSONResponse(status_code=422, content=envelope.model_dump())

    @app.exception_handler(HTTPException)
    async def _http_error(request: Request, exc: HTTPException):
        if isinstance(exc.detail, dict):
            envelope = ErrorEnvelope(**exc.detail)
        else:
            envelope = ErrorEnvelope(code="error", message=str(exc.detail))
        return JSONResponse(status_code=exc.status_code, content=envelope.model_dump())

    def not_found(code: str, message: str) -> HTTPException:
        return HTTPException(status_code=404, detail={"code": code, "message": message})

    def bad_request(code: str, message: str) -> HTTPException:
        return HTTPException(status_code=400, detail={"code": code, "message": message})

    def run_or_404(run_id: str) -> RunResult:
        run = cache.get(run_id)
        if run is None:
            raise not_found("unknown_run", f"run {run_id} is not cached; POST /runs first")
        return run

    @app.get(f"{API_PREFIX}/summary/daily-rpt", response_model=DailySummaryModel)
    def daily_rpt_summary(
        from_: date | None = Query(default=None, alias="from"),
        to: date | None = Query(default=None, alias="to"),
    ):
        start = from_ or bench.period.start
        end = to or bench.period.end
        if start > end:
            raise bad_request("invalid_range", f"from {start} is after to {end}")
        summary = feat.daily_related_party_amounts(bench.net, bench.trade, DateRange(start, end))
        return DailySummaryModel(
            start=summary.start, end=summary.end,
            days=[DayAmountModel(date=summary.range.day(i), amount=a)
                  for i, a in enumerate(summary.amounts)],
        )

    @app.post(f"{API_PREFIX}/runs", response_model=RunHandleModel)
    def post_run(body: RunParamsModel):
        params = body.to_params()
        run_id = bench.run_id_for(params)
        run = cache.get_or_compute(run_id, lambda: bench.compute_run(params))
        return RunHandleModel(run_id=run.run_id, status="done",
                              created_at=run.created_at, n_groups=len(run.groups))

    @app.get(f"{API_PREFIX}/runs/{{run_id}}/groups", response_model=GroupListModel)
    def list_groups(
        run_id: str,
        sort: Literal["effective_rpts", "rpt_amount", "evasion_taxpayers"] = "effective_rpts",
        desc: bool = True,
        limit: int | None = Query(default=None, ge=0),
    ):
        run = run_or_404(run_id)
        ordered = feat.rank_groups(run.groups, criterion=sort, descending=desc)
        if limit is not None:
            ordered = ordered[:limit]
        return GroupListModel(
            run_id=run_id, total=len(run.groups), sort=sort, descending=desc,
            groups=[_group_summary(g) for g in ordered],
        )

    @app.get(f"{API_PREFIX}/runs/{{run_id}}/groups/{{group_id}}/graph",
             response_model=GraphPayloadModel)
    def group_graph(run_id: str, group_id: str):
        run = run_or_404(run_id)
        try:
            group = run.group(group_id)
        except KeyError:
            raise not_found("unknown_group", f"run {run_id} has no group {group_id}")
        period = DateRange(run.params.period_start, run.params.period_end)
        layers = layer_assignment(group, bench.net)
        nodes = []
        for nid in group.node_ids:
            node = bench.net.nodes[nid]
            status = (feat.period_end_profit_status(nid, bench.trade, period)
                      if node.is_taxpayer else feat.NEUTRAL)
            nodes.append(GraphNodeModel(
                id=nid, kind=node.kind, has_evasion_record=node.has_evasion_record,
                profit_status=status, layer=layers[nid]))
        edges = [GraphEdgeModel(src=e.investor_id, dst=e.investee_id,
                                type="investment", weight=e.share_ratio)
                 for e in group.investment_edges]
        rpt_pairs: dict[tuple[str, str], dict] = {}
        for rpt in group.rpts:
            key = (rpt.invoice.buyer_id, rpt.invoice.seller_id)
            entry = rpt_pairs.setdefault(key, {"cents": 0, "ids": [], "owners": set()})
            entry["cents"] += to_cents(rpt.invoice.amount)
            entry["ids"].append(rpt.invoice.invoice_id)
            entry["owners"].update(rpt.common_owners)
        edges.extend(GraphEdgeModel(
            src=src, dst=dst, type="rpt", weight=from_cents(entry["cents"]),
            invoice_ids=entry["ids"], common_owners=sorted(entry["owners"]))
            for (src, dst), entry in sorted(rpt_pairs.items()))
        return GraphPayloadModel(group_id=group_id, nodes=nodes, edges=edges)

    @app.get(f"{API_PREFIX}/runs/{{run_id}}/groups/{{group_id}}/rpts/{{rpt_id}}/detail",
             response_model=DetailModel)
    def rpt_detail(run_id: str, group_id: str, rpt_id: str,
                   granularity: Literal["quarter", "year"] = "quarter",
                   anchor: date | None = None):
        run = run_or_404(run_id)
        try:
            group = run.group(group_id)
        except KeyError:
            raise not_found("unknown_group", f"run {run_id} has no group {group_id}")
        rpt = next((r for r in group.rpts if r.invoice.invoice_id == rpt_id), None)
        if rpt is None:
            raise not_found("unknown_rpt", f"group {group_id} has no transaction {rpt_id}")
        inv = rpt.invoice
        # anchor lets the client page through statement periods; default is
        # the period containing the transaction itself
        anchor_day = anchor or inv.date
        raw_window = feat.statement_window(anchor_day, granularity)
        if raw_window.end < bench.period.start or raw_window.start > bench.period.end:
            raise bad_request("anchor_outside_range",
                              f"no data in the {granularity} around {anchor_day}")
        window = feat.statement_window(anchor_day, granularity, clamp=bench.period)

        def series_model(tid: str) -> SeriesModel:
            series = feat.cumulative_daily_profit(tid, bench.trade, window)
            return SeriesModel(taxpayer_id=tid, start=window.start, end=window.end,
                               values=series.values,
                               status=feat.profit_status_of(series.final))

        displayed = {inv.buyer_id, inv.seller_id}
        dots, arrows = [], []
        for other in group.rpts:
            oi = other.invoice
            if oi.date not in window:
                continue
            touched = displayed & {oi.buyer_id, oi.seller_id}
            if not touched:
                continue
            paired = len(touched) == 2
            for tid in sorted(touched):
                selling = oi.seller_id == tid
                dots.append(DotModel(
                    invoice_id=oi.invoice_id, date=oi.date, taxpayer_id=tid,
                    amount=oi.amount,
                    direction="in" if selling else "out",
                    effect="profit" if selling else "loss",
                    paired=paired,
                ))
            if paired:
                arrows.append(ArrowModel(invoice_id=oi.invoice_id,
                                         src_taxpayer=oi.buyer_id,
                                         dst_taxpayer=oi.seller_id))

        owners = []
        for owner_id in rpt.common_owners:
            to_buyer = bench.net.max_ratio_to(inv.buyer_id).get(owner_id, 0.0)
            to_seller = bench.net.max_ratio_to(inv.seller_id).get(owner_id, 0.0)
            owners.append(OwnerModel(
                owner_id=owner_id,
                ratio_to_buyer=to_buyer,
                ratio_to_seller=to_seller,
                chain_to_buyer=[
                    ChainEdgeModel(src=e.investor_id, dst=e.investee_id, ratio=e.share_ratio)
                    for e in (ownership_chain(bench.net, owner_id, inv.buyer_id)
                              if owner_id != inv.buyer_id else [])],
                chain_to_seller=[
                    ChainEdgeModel(src=e.investor_id, dst=e.investee_id, ratio=e.share_ratio)
                    for e in (ownership_chain(bench.net, owner_id, inv.seller_id)
                              if owner_id != inv.seller_id else [])],
            ))

        return DetailModel(
            rpt=RptModel(
                invoice_id=inv.invoice_id, date=inv.date, seller_id=inv.seller_id,
                buyer_id=inv.buyer_id, amount=inv.amount, vat_amount=inv.vat_amount,
                chain_length=rpt.chain_length, common_owners=list(rpt.common_owners),
                effective=rpt.effective),
            granularity=granularity,
            window_start=window.start,
            window_end=window.end,
            buyer=series_model(inv.buyer_id),
            seller=series_model(inv.seller_id),
            dots=dots,
            arrows=arrows,
            owners=owners,
        )

    @app.get(f"{API_PREFIX}/taxpayers/{{taxpayer_id}}", response_model=TaxpayerLocateModel)
    def locate_taxpayer(taxpayer_id: str, run_id: str | None = None):
        if not bench.is_known(taxpayer_id):
            raise not_found("unknown_taxpayer", f"{taxpayer_id} does not appear in the dataset")
        run = run_or_404(run_id) if run_id is not None else None
        in_net = taxpayer_id in bench.net.nodes
        group_id = None
        if run is not None and in_net:
            for g in run.groups:
                if taxpayer_id in g.node_ids:
                    group_id = g.group_id
                    break
        profile = bench.profiles.get(taxpayer_id)
        inv_profile = bench.investor_profiles.get(taxpayer_id)
        return TaxpayerLocateModel(
            id=taxpayer_id,
            found=in_net,
            prune_reason=bench.net.prune_log.get(taxpayer_id),
            kind=bench.net.nodes[taxpayer_id].kind if in_net
                 else (bench.full_net.nodes[taxpayer_id].kind
                       if taxpayer_id in bench.full_net.nodes else None),
            profile=TaxpayerProfileModel(
                id=profile.id, industry=profile.industry,
                ownership_type=profile.ownership_type, region=profile.region,
                merchandise=profile.merchandise) if profile else None,
            entity_kind=inv_profile.entity_kind if inv_profile else None,
            audits=[AuditModel(
                audit_date=a.audit_date, violation_type=a.violation_type,
                description=a.description, action_taken=a.action_taken,
                tax_payable=a.tax_payable)
                for a in bench.audits_by_taxpayer.get(taxpayer_id, [])],
            run_id=run_id,
            group_id=group_id,
        )

    if frontend_dir and Path(frontend_dir).is_dir():
        app.mount("/", StaticFiles(directory=str(frontend_dir), html=True), name="frontend")
    return app


def run_server(app: FastAPI, listen: str = "127.0.0.1:8800"):
    import uvicorn

    host, _, port = listen.rpartition(":")
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port), log_level="warning")
