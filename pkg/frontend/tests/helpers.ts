// Fixture dataset and a fetch mock that records every API call, so tests can
// assert both what was requested and what got rendered.

import type {
  DailySummary,
  DetailPayload,
  GraphPayload,
  GroupList,
  TaxpayerLocate,
} from "../src/api";

export interface RecordedCall {
  method: string;
  url: string;
  body: unknown | null;
}

const SUMMARY_START = "2014-01-01";
const SUMMARY_END = "2014-06-30";

function isoDay(offset: number, from = SUMMARY_START): string {
  return new Date(Date.parse(from) + offset * 86_400_000).toISOString().slice(0, 10);
}

function dayCount(start: string, end: string): number {
  return Math.round((Date.parse(end) - Date.parse(start)) / 86_400_000) + 1;
}

export const SUMMARY_DAYS = dayCount(SUMMARY_START, SUMMARY_END);

const AMOUNTS: Record<string, number> = {
  "2014-02-10": 500.0,
  "2014-03-05": 100.0,
  "2014-03-20": 50.0,
};

export function fixtureSummary(): DailySummary {
  const days = Array.from({ length: SUMMARY_DAYS }, (_, i) => {
    const date = isoDay(i);
    return { date, amount: AMOUNTS[date] ?? 0.0 };
  });
  return { start: SUMMARY_START, end: SUMMARY_END, days };
}

export function fixtureGroups(sort: string, descending: boolean): GroupList {
  const g1 = {
    group_id: "g1",
    features: {
      n_taxpayers: 2, n_evasion_taxpayers: 1, total_rpt_amount: 650.0,
      n_rpts: 3, n_effective_rpts: 2,
    },
    traders: ["TA1", "TA2"],
    arcs: [
      { src: "TA1", dst: "TA2", amount: 150.0, n_invoices: 2 },
      { src: "TA2", dst: "TA1", amount: 500.0, n_invoices: 1 },
    ],
  };
  const g2 = {
    group_id: "g2",
    features: {
      n_taxpayers: 2, n_evasion_taxpayers: 0, total_rpt_amount: 75.0,
      n_rpts: 1, n_effective_rpts: 0,
    },
    traders: ["TB1", "TB2"],
    arcs: [{ src: "TB2", dst: "TB1", amount: 75.0, n_invoices: 1 }],
  };
  return { run_id: "run", total: 2, sort, descending, groups: [g1, g2] };
}

export function fixtureGraph(): GraphPayload {
  return {
    group_id: "g1",
    nodes: [
      { id: "P1", kind: "investor", has_evasion_record: false,
        profit_status: "neutral", layer: 0 },
      { id: "TA1", kind: "taxpayer", has_evasion_record: true,
        profit_status: "profit", layer: 1 },
      { id: "TA2", kind: "taxpayer", has_evasion_record: false,
        profit_status: "loss", layer: 1 },
    ],
    edges: [
      { src: "P1", dst: "TA1", type: "investment", weight: 0.6,
        invoice_ids: null, common_owners: null },
      { src: "P1", dst: "TA2", type: "investment", weight: 0.6,
        invoice_ids: null, common_owners: null },
      { src: "TA1", dst: "TA2", type: "rpt", weight: 150.0,
        invoice_ids: ["I0002", "I0003"], common_owners: ["P1"] },
      { src: "TA2", dst: "TA1", type: "rpt", weight: 500.0,
        invoice_ids: ["I0001"], common_owners: ["P1"] },
    ],
  };
}

export function fixtureDetail(granularity: "quarter" | "year"): DetailPayload {
  const windowStart = "2014-01-01";
  const windowEnd = granularity === "quarter" ? "2014-03-31" : "2014-12-31";
  const n = dayCount(windowStart, windowEnd);
  const buyer: number[] = [];
  const seller: number[] = [];
  let b = 0;
  let s = 0;
  for (let i = 0; i < n; i++) {
    const date = isoDay(i, windowStart);
    if (date === "2014-02-10") { b += 500; s -= 500; }
    if (date === "2014-03-05") { b -= 100; s += 100; }
    if (date === "2014-03-20") { b -= 50; s += 50; }
    buyer.push(b);
    seller.push(s);
  }
  return {
    rpt: {
      invoice_id: "I0002", date: "2014-03-05", seller_id: "TA2", buyer_id: "TA1",
      amount: 100.0, vat_amount: 13.0, chain_length: 2,
      common_owners: ["P1"], effective: true,
    },
    granularity,
    window_start: windowStart,
    window_end: windowEnd,
    buyer: { taxpayer_id: "TA1", start: windowStart, end: windowEnd,
             values: buyer, status: "profit" },
    seller: { taxpayer_id: "TA2", start: windowStart, end: windowEnd,
              values: seller, status: "loss" },
    dots: [
      { invoice_id: "I0001", date: "2014-02-10", taxpayer_id: "TA1", amount: 500.0,
        direction: "in", effect: "profit", paired: true },
      { invoice_id: "I0001", date: "2014-02-10", taxpayer_id: "TA2", amount: 500.0,
        direction: "out", effect: "loss", paired: true },
      { invoice_id: "I0002", date: "2014-03-05", taxpayer_id: "TA1", amount: 100.0,
        direction: "out", effect: "loss", paired: true },
      { invoice_id: "I0002", date: "2014-03-05", taxpayer_id: "TA2", amount: 100.0,
        direction: "in", effect: "profit", paired: true },
      { invoice_id: "I0003", date: "2014-03-20", taxpayer_id: "TA1", amount: 50.0,
        direction: "out", effect: "loss", paired: true },
      { invoice_id: "I0003", date: "2014-03-20", taxpayer_id: "TA2", amount: 50.0,
        direction: "in", effect: "profit", paired: true },
    ],
    arrows: [
      { invoice_id: "I0001", src_taxpayer: "TA2", dst_taxpayer: "TA1" },
      { invoice_id: "I0002", src_taxpayer: "TA1", dst_taxpayer: "TA2" },
      { invoice_id: "I0003", src_taxpayer: "TA1", dst_taxpayer: "TA2" },
    ],
    owners: [{
      owner_id: "P1", ratio_to_buyer: 0.6, ratio_to_seller: 0.6,
      chain_to_buyer: [{ src: "P1", dst: "TA1", ratio: 0.6 }],
      chain_to_seller: [{ src: "P1", dst: "TA2", ratio: 0.6 }],
    }],
  };
}

export function fixtureLocate(id: string, runId: string | null): TaxpayerLocate {
  return {
    id, found: true, prune_reason: null, kind: "taxpayer",
    profile: { id, industry: "mfg", ownership_type: "private",
               region: "north", merchandise: "steel" },
    entity_kind: null, audits: [], run_id: runId, group_id: runId ? "g1" : null,
  };
}

export function installMockApi(): RecordedCall[] {
  const calls: RecordedCall[] = [];

  globalThis.fetch = (async (input: RequestInfo | URL, init?: RequestInit) => {
    const url = String(input);
    const method = init?.method ?? "GET";
    const body = init?.body ? JSON.parse(String(init.body)) : null;
    calls.push({ method, url, body });

    const respond = (payload: unknown, status = 200) =>
      new Response(JSON.stringify(payload), {
        status, headers: { "Content-Type": "application/json" },
      });

    const path = url.split("?")[0];
    const query = new URLSearchParams(url.split("?")[1] ?? "");

    if (path === "/api/v1/summary/daily-rpt") {
      return respond(fixtureSummary());
    }
    if (path === "/api/v1/runs" && method === "POST") {
      // run id derived from the params so different settings mean a new run
      const runId = `run-${body.period_start}-${body.period_end}-${body.max_txn_chain}`;
      return respond({ run_id: runId, status: "done",
                       created_at: "2014-01-01T00:00:00Z", n_groups: 2 });
    }
    let m = path.match(/^\/api\/v1\/runs\/([^/]+)\/groups$/);
    if (m) {
      return respond(fixtureGroups(query.get("sort") ?? "effective_rpts",
                                   query.get("desc") !== "false"));
    }
    m = path.match(/^\/api\/v1\/runs\/([^/]+)\/groups\/([^/]+)\/graph$/);
    if (m) {
      return respond(fixtureGraph());
    }
    m = path.match(/^\/api\/v1\/runs\/([^/]+)\/groups\/([^/]+)\/rpts\/([^/]+)\/detail$/);
    if (m) {
      const granularity = (query.get("granularity") ?? "quarter") as "quarter" | "year";
      if (query.get("anchor")?.startsWith("2020")) {
        return respond({ code: "anchor_outside_range", message: "no data",
                         field_errors: {} }, 400);
      }
      return respond(fixtureDetail(granularity));
    }
    m = path.match(/^\/api\/v1\/taxpayers\/([^/]+)$/);
    if (m) {
      if (m[1] === "GHOST") {
        return respond({ code: "unknown_taxpayer", message: "not in the dataset",
                         field_errors: {} }, 404);
      }
      return respond(fixtureLocate(m[1], query.get("run_id")));
    }
    return respond({ code: "error", message: `unrouted ${url}`, field_errors: {} }, 500);
  }) as typeof fetch;

  return calls;
}

export function mountAppShell(): void {
  document.body.innerHTML = `
    <div id="app-root">
      <section id="control-panel"></section>
      <section id="group-overview"></section>
      <section id="graph-view"></section>
      <section id="detail-view"></section>
    </div>`;
}

export async function flush(times = 3): Promise<void> {
  for (let i = 0; i < times; i++) {
    await new Promise((resolve) => setTimeout(resolve, 0));
  }
}
