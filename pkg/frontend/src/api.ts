// Typed client for the /api/v1 detection service. Every number the UI draws
// comes out of these payloads; the views never aggregate amounts themselves.

export interface DayAmount {
  date: string;
  amount: number;
}

export interface DailySummary {
  start: string;
  end: string;
  days: DayAmount[];
}

export interface FusionParams {
  period_start: string;
  period_end: string;
  max_txn_chain: number;
  max_ctrl_chain: number;
  min_ratio: number;
}

export interface RunHandle {
  run_id: string;
  status: "running" | "done" | "failed";
  created_at: string;
  n_groups: number;
}

export interface GroupFeatures {
  n_taxpayers: number;
  n_evasion_taxpayers: number;
  total_rpt_amount: number;
  n_rpts: number;
  n_effective_rpts: number;
}

export interface Arc {
  src: string; // buyer: arcs follow the cash flow
  dst: string; // seller
  amount: number;
  n_invoices: number;
}

export interface GroupSummary {
  group_id: string;
  features: GroupFeatures;
  traders: string[];
  arcs: Arc[];
}

export interface GroupList {
  run_id: string;
  total: number;
  sort: string;
  descending: boolean;
  groups: GroupSummary[];
}

export type NodeKind = "taxpayer" | "investor" | "both";
export type ProfitStatus = "profit" | "loss" | "neutral";

export interface GraphNode {
  id: string;
  kind: NodeKind;
  has_evasion_record: boolean;
  profit_status: ProfitStatus;
  layer: number;
}

export interface GraphEdge {
  src: string;
  dst: string;
  type: "investment" | "rpt";
  weight: number;
  invoice_ids: string[] | null;
  common_owners: string[] | null;
}

export interface GraphPayload {
  group_id: string;
  nodes: GraphNode[];
  edges: GraphEdge[];
}

export interface SeriesPayload {
  taxpayer_id: string;
  start: string;
  end: string;
  values: number[];
  status: ProfitStatus;
}

export interface RptInfo {
  invoice_id: string;
  date: string;
  seller_id: string;
  buyer_id: string;
  amount: number;
  vat_amount: number;
  chain_length: number;
  common_owners: string[];
  effective: boolean;
}

export interface Dot {
  invoice_id: string;
  date: string;
  taxpayer_id: string;
  amount: number;
  direction: "in" | "out";
  effect: "profit" | "loss";
  paired: boolean;
}

export interface Arrow {
  invoice_id: string;
  src_taxpayer: string; // buyer side: the arrow follows the cash flow
  dst_taxpayer: string;
}

export interface ChainEdge {
  src: string;
  dst: string;
  ratio: number;
}

export interface OwnerChains {
  owner_id: string;
  ratio_to_buyer: number;
  ratio_to_seller: number;
  chain_to_buyer: ChainEdge[];
  chain_to_seller: ChainEdge[];
}

export type Granularity = "quarter" | "year";

export interface DetailPayload {
  rpt: RptInfo;
  granularity: Granularity;
  window_start: string;
  window_end: string;
  buyer: SeriesPayload;
  seller: SeriesPayload;
  dots: Dot[];
  arrows: Arrow[];
  owners: OwnerChains[];
}

export interface TaxpayerLocate {
  id: string;
  found: boolean;
  prune_reason: string | null;
  kind: string | null;
  profile: Record<string, string> | null;
  entity_kind: string | null;
  audits: unknown[];
  run_id: string | null;
  group_id: string | null;
}

export class ApiError extends Error {
  constructor(public status: number, public code: string, message: string) {
    super(message);
  }
}

export class ApiClient {
  constructor(private base: string = "/api/v1") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const resp = await fetch(this.base + path, init);
    const body = await resp.json();
    if (!resp.ok) {
      throw new ApiError(resp.status, body.code ?? "error", body.message ?? resp.statusText);
    }
    return body as T;
  }

  summary(from?: string, to?: string): Promise<DailySummary> {
    const params = new URLSearchParams();
    if (from) params.set("from", from);
    if (to) params.set("to", to);
    const suffix = params.size ? `?${params}` : "";
    return this.request<DailySummary>(`/summary/daily-rpt${suffix}`);
  }

  postRun(params: FusionParams): Promise<RunHandle> {
    return this.request<RunHandle>("/runs", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(params),
    });
  }

  groups(runId: string, sort: string, descending: boolean): Promise<GroupList> {
    return this.request<GroupList>(
      `/runs/${runId}/groups?sort=${sort}&desc=${descending}`);
  }

  graph(runId: string, groupId: string): Promise<GraphPayload> {
    return this.request<GraphPayload>(`/runs/${runId}/groups/${groupId}/graph`);
  }

  detail(runId: string, groupId: string, rptId: string, granularity: Granularity,
         anchor?: string): Promise<DetailPayload> {
    const params = new URLSearchParams({ granularity });
    if (anchor) params.set("anchor", anchor);
    return this.request<DetailPayload>(
      `/runs/${runId}/groups/${groupId}/rpts/${rptId}/detail?${params}`);
  }

  taxpayer(id: string, runId?: string): Promise<TaxpayerLocate> {
    const suffix = runId ? `?run_id=${runId}` : "";
    return this.request<TaxpayerLocate>(`/taxpayers/${encodeURIComponent(id)}${suffix}`);
  }
}
