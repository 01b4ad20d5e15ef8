// Central view state. Selections form a chain: a transaction is only valid
// under its group, a group only under its run; setters clear everything
// downstream so no view can render a stale selection.

import type { FusionParams, Granularity } from "./api";

export type ColorScheme = "brown-blue-green" | "red-yellow-green";
export type SortCriterion = "effective_rpts" | "rpt_amount" | "evasion_taxpayers";

export const DEFAULT_PARAMS = {
  max_txn_chain: 4,
  max_ctrl_chain: 4,
  min_ratio: 0.1,
};

export class ViewState {
  periodStart = "";
  periodEnd = "";
  maxTxnChain = DEFAULT_PARAMS.max_txn_chain;
  maxCtrlChain = DEFAULT_PARAMS.max_ctrl_chain;
  minRatio = DEFAULT_PARAMS.min_ratio;

  runId: string | null = null;
  sort: SortCriterion = "effective_rpts";
  descending = true;
  groupId: string | null = null;
  rptId: string | null = null;
  granularity: Granularity = "quarter";
  anchor: string | null = null;
  scheme: ColorScheme = "brown-blue-green";
  arrowsVisible = true;

  get params(): FusionParams {
    return {
      period_start: this.periodStart,
      period_end: this.periodEnd,
      max_txn_chain: this.maxTxnChain,
      max_ctrl_chain: this.maxCtrlChain,
      min_ratio: this.minRatio,
    };
  }

  setPeriod(start: string, end: string) {
    this.periodStart = start;
    this.periodEnd = end;
  }

  selectRun(runId: string) {
    if (this.runId !== runId) {
      this.groupId = null;
      this.rptId = null;
      this.anchor = null;
    }
    this.runId = runId;
  }

  clearRun() {
    this.runId = null;
    this.groupId = null;
    this.rptId = null;
    this.anchor = null;
  }

  selectGroup(groupId: string) {
    if (this.runId === null) {
      throw new Error("cannot select a group without a run");
    }
    if (this.groupId !== groupId) {
      this.rptId = null;
      this.anchor = null;
    }
    this.groupId = groupId;
  }

  selectRpt(rptId: string) {
    if (this.groupId === null) {
      throw new Error("cannot select a transaction without a group");
    }
    if (this.rptId !== rptId) {
      this.anchor = null;
    }
    this.rptId = rptId;
  }

  get selectionChainValid(): boolean {
    if (this.rptId !== null && this.groupId === null) return false;
    if (this.groupId !== null && this.runId === null) return false;
    return true;
  }
}

// Quarter boundaries for the control panel's click-to-select behavior.
export function quarterOf(isoDate: string): { start: string; end: string } {
  const [y, m] = isoDate.split("-").map(Number);
  const q = Math.floor((m - 1) / 3);
  const startMonth = q * 3 + 1;
  const endMonth = startMonth + 2;
  const endDay = new Date(Date.UTC(y, endMonth, 0)).getUTCDate();
  const pad = (n: number) => String(n).padStart(2, "0");
  return {
    start: `${y}-${pad(startMonth)}-01`,
    end: `${y}-${pad(endMonth)}-${pad(endDay)}`,
  };
}

export function shiftAnchor(isoDate: string, granularity: Granularity,
                            steps: number): string {
  const [y, m] = isoDate.split("-").map(Number);
  const months = granularity === "quarter" ? 3 : 12;
  const total = (y * 12 + (m - 1)) + steps * months;
  const ny = Math.floor(total / 12);
  const nm = (total % 12) + 1;
  return `${ny}-${String(nm).padStart(2, "0")}-15`;
}
