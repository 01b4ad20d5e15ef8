"""Profit series, transaction effectiveness, and group suspicion features.

Cumulative daily profit is the running signed sum of trade cash flows inside a
tax period: sales count in, purchases count out, and the series restarts from
zero at the period start. All accumulation happens in integer cents so closed
sets of invoices cancel exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date, timedelta

from .fusion import RelatedPartyTransaction, RptteGroup
from .network import TaxpayerNetwork, TradeNetwork
from .records import AuditRecord, DateRange, from_cents, to_cents

PROFIT = "profit"
LOSS = "loss"
NEUTRAL = "neutral"

RANK_CRITERIA = ("effective_rpts", "rpt_amount", "evasion_taxpayers")


@dataclass
class ProfitSeries:
    taxpayer_id: str
    period_start: date
    period_end: date
    values: list[float]

    @property
    def range(self) -> DateRange:
        return DateRange(self.period_start, self.period_end)

    def covers(self, d: date) -> bool:
        return self.period_start <= d <= self.period_end

    def value_on(self, d: date) -> float:
        if not self.covers(d):
            raise ValueError(f"{d} outside series period {self.period_start}..{self.period_end}")
        return self.values[(d - self.period_start).days]

    def value_before(self, d: date) -> float:
        """Cumulative profit as of the end of the day before d; 0 on the first day."""
        idx = (d - self.period_start).days
        if idx < 0 or idx >= len(self.values):
            raise ValueError(f"{d} outside series period {self.period_start}..{self.period_end}")
        return self.values[idx - 1] if idx > 0 else 0.0

    @property
    def final(self) -> float:
        return self.values[-1] if self.values else 0.0


@dataclass(frozen=True)
class GroupFeatures:
    n_taxpayers: int
    n_evasion_taxpayers: int
    total_rpt_amount: float
    n_rpts: int
    n_effective_rpts: int


@dataclass
class DailyRptSummary:
    start: date
    end: date
    amounts: list[float]

    @property
    def range(self) -> DateRange:
        return DateRange(self.start, self.end)


def cumulative_daily_profit(taxpayer_id: str, trade: TradeNetwork, period: DateRange,
                            include_vat: bool = False) -> ProfitSeries:
    """Per-day cumulative cash flow for one taxpayer over the period.

    Every trade-network invoice touching the taxpayer counts, not only related
    party ones. VAT is collected on behalf of the state and excluded from the
    flow unless include_vat is set.
    """
    deltas = [0] * period.n_days
    for inv in trade.invoices_touching(taxpayer_id):
        if inv.date not in period:
            continue
        cents = to_cents(inv.amount)
        if include_vat:
            cents += to_cents(inv.vat_amount)
        idx = period.index(inv.date)
        if inv.seller_id == taxpayer_id:
            deltas[idx] += cents
        else:
            deltas[idx] -= cents
    values, running = [], 0
    for d in deltas:
        running += d
        values.append(from_cents(running))
    return ProfitSeries(taxpayer_id=taxpayer_id, period_start=period.start,
                        period_end=period.end, values=values)


def is_effective_rpt(rpt: RelatedPartyTransaction, buyer_series: ProfitSeries,
                     seller_series: ProfitSeries, include_reverse: bool = False) -> bool:
    """Whether the transaction ran from a seller in loss to a buyer in profit.

    Profit status is read as of the end of the day before the transaction, so a
    transaction never flips its own classification; first-day transactions see
    zero balances and are never effective. Zero is neutral, neither profit nor
    loss. include_reverse also counts the mirrored buyer-in-loss case.
    """
    d = rpt.invoice.date
    if not buyer_series.covers(d) or not seller_series.covers(d):
        raise ValueError(f"rpt date {d} outside the provided series")
    buyer_prior = buyer_series.value_before(d)
    seller_prior = seller_series.value_before(d)
    if buyer_prior > 0 and seller_prior < 0:
        return True
    if include_reverse and buyer_prior < 0 and seller_prior > 0:
        return True
    return False


def group_features(group: RptteGroup, trade: TradeNetwork, period: DateRange,
                   audits: list[AuditRecord], include_vat: bool = False) -> GroupFeatures:
    """Compute the group's suspicion features and fill per-rpt effectiveness."""
    violators = {a.taxpayer_id for a in audits if a.is_violation}
    series: dict[str, ProfitSeries] = {}

    def series_for(tid: str) -> ProfitSeries:
        if tid not in series:
            series[tid] = cumulative_daily_profit(tid, trade, period, include_vat=include_vat)
        return series[tid]

    total_cents = 0
    n_effective = 0
    for rpt in group.rpts:
        inv = rpt.invoice
        total_cents += to_cents(inv.amount)
        rpt.effective = is_effective_rpt(rpt, series_for(inv.buyer_id), series_for(inv.seller_id))
        n_effective += int(rpt.effective)

    features = GroupFeatures(
        n_taxpayers=len(group.taxpayer_ids),
        n_evasion_taxpayers=len(violators & set(group.taxpayer_ids)),
        total_rpt_amount=from_cents(total_cents),
        n_rpts=len(group.rpts),
        n_effective_rpts=n_effective,
    )
    group.features = features
    return features


def annotate_groups(groups: list[RptteGroup], trade: TradeNetwork, period: DateRange,
                    audits: list[AuditRecord], include_vat: bool = False) -> list[RptteGroup]:
    for g in groups:
        group_features(g, trade, period, audits, include_vat=include_vat)
    return groups


def daily_rpt_amount(groups: list[RptteGroup], period: DateRange) -> DailyRptSummary:
    """Per-day related party transaction amount summed over all groups."""
    cents = [0] * period.n_days
    for g in groups:
        for rpt in g.rpts:
            if rpt.invoice.date in period:
                cents[period.index(rpt.invoice.date)] += to_cents(rpt.invoice.amount)
    return DailyRptSummary(start=period.start, end=period.end,
                           amounts=[from_cents(c) for c in cents])


def daily_related_party_amounts(net: TaxpayerNetwork, trade: TradeNetwork,
                                period: DateRange) -> DailyRptSummary:
    """Parameter-free daily summary: invoices whose traders share a component.

    This is the related-party criterion that needs no fusion run, used to draw
    the temporal overview before any thresholds are chosen.
    """
    cents = [0] * period.n_days
    for seller, buyer in trade.pairs():
        if net.component_index.get(seller) != net.component_index.get(buyer):
            continue
        for inv in trade.edges[(seller, buyer)]:
            if inv.date in period:
                cents[period.index(inv.date)] += to_cents(inv.amount)
    return DailyRptSummary(start=period.start, end=period.end,
                           amounts=[from_cents(c) for c in cents])


def period_end_profit_status(taxpayer_id: str, trade: TradeNetwork, period: DateRange,
                             include_vat: bool = False) -> str:
    final = cumulative_daily_profit(taxpayer_id, trade, period, include_vat=include_vat).final
    if final > 0:
        return PROFIT
    if final < 0:
        return LOSS
    return NEUTRAL


def profit_status_of(value: float) -> str:
    if value > 0:
        return PROFIT
    if value < 0:
        return LOSS
    return NEUTRAL


def _criterion_value(group: RptteGroup, criterion: str):
    if group.features is None:
        raise ValueError(f"group {group.group_id} has no computed features")
    if criterion == "effective_rpts":
        return group.features.n_effective_rpts
    if criterion == "rpt_amount":
        return group.features.total_rpt_amount
    if criterion == "evasion_taxpayers":
        return group.features.n_evasion_taxpayers
    raise ValueError(f"unknown ranking criterion {criterion!r}, expected one of {RANK_CRITERIA}")


def rank_groups(groups: list[RptteGroup], criterion: str = "effective_rpts",
                descending: bool = True) -> list[RptteGroup]:
    """Order groups by a feature; ties always break by group id ascending."""
    if criterion not in RANK_CRITERIA:
        raise ValueError(f"unknown ranking criterion {criterion!r}, expected one of {RANK_CRITERIA}")
    ordered = sorted(groups, key=lambda g: g.group_id)
    ordered.sort(key=lambda g: _criterion_value(g, criterion), reverse=descending)
    return ordered


def statement_window(d: date, granularity: str, clamp: DateRange | None = None) -> DateRange:
    """The quarterly or yearly statement period containing the given day."""
    if granularity == "quarter":
        q_start_month = 3 * ((d.month - 1) // 3) + 1
        start = date(d.year, q_start_month, 1)
        if q_start_month == 10:
            end = date(d.year, 12, 31)
        else:
            end = date(d.year, q_start_month + 3, 1) - timedelta(days=1)
    elif granularity == "year":
        start, end = date(d.year, 1, 1), date(d.year, 12, 31)
    else:
        raise ValueError(f"granularity must be 'quarter' or 'year', got {granularity!r}")
    if clamp is not None:
        start = max(start, clamp.start)
        end = min(end, clamp.end)
    return DateRange(start, end)
