"""Workbench for detecting and exploring related-party-transaction tax evasion groups."""

from .features import (
    DailyRptSummary,
    GroupFeatures,
    ProfitSeries,
    cumulative_daily_profit,
    daily_rpt_amount,
    group_features,
    is_effective_rpt,
    period_end_profit_status,
    rank_groups,
)
from .fusion import (
    FusionParams,
    RelatedPartyTransaction,
    RptteGroup,
    common_beneficial_owners,
    detect_groups,
    ownership_chain,
)
from .ingest import Dataset, load_dataset
from .masking import mask_dataset
from .network import (
    EntityNode,
    TaxpayerNetwork,
    TradeNetwork,
    build_taxpayer_network,
    build_trade_network,
    final_investment_ratio,
    prune_network,
)
from .records import (
    AuditRecord,
    ConfigError,
    DateRange,
    FormatError,
    InvestmentEdge,
    InvestorProfile,
    Invoice,
    TaxpayerProfile,
    UnknownEntityError,
)
from .synth import GroundTruth, SynthConfig, generate

__version__ = "0.1.0"
