// Group Overview: one row per suspicious group, an arc glyph of the trading
// topology next to feature bars. Arcs follow the cash flow; left-to-right
// flows bow above the baseline, right-to-left below, and the stroke width
// encodes the transaction amount.

import type { GroupSummary } from "./api";
import type { SortCriterion, ViewState } from "./state";
import { clearChildren, htmlEl, svgEl, titleTip } from "./svg";

export interface GroupOverviewHandlers {
  onSort(criterion: SortCriterion): void;
  onGroupSelect(groupId: string): void;
  onTraderHover(taxpayerId: string, active: boolean): void;
}

const GLYPH_WIDTH = 180;
const GLYPH_HEIGHT = 64;
const BASELINE = GLYPH_HEIGHT / 2;
const FEATURES: Array<{ key: SortCriterion; label: string; value: (g: GroupSummary) => number }> = [
  { key: "evasion_taxpayers", label: "evaders", value: (g) => g.features.n_evasion_taxpayers },
  { key: "rpt_amount", label: "amount", value: (g) => g.features.total_rpt_amount },
  { key: "effective_rpts", label: "effective", value: (g) => g.features.n_effective_rpts },
];

export class GroupOverview {
  private header: HTMLElement;
  private listHost: HTMLElement;

  constructor(container: HTMLElement, private state: ViewState,
              private handlers: GroupOverviewHandlers) {
    this.header = htmlEl("div", { class: "sort-buttons" }, container);
    this.listHost = htmlEl("div", { class: "group-list" }, container);
    this.renderSortButtons();
  }

  private renderSortButtons() {
    clearChildren(this.header);
    htmlEl("span", {}, this.header, "sort by:");
    for (const feature of FEATURES) {
      const btn = htmlEl("button", {
        class: `sort-button${this.state.sort === feature.key ? " active" : ""}`,
        "data-criterion": feature.key,
      }, this.header, feature.label);
      btn.addEventListener("click", () => this.handlers.onSort(feature.key));
    }
  }

  render(groups: GroupSummary[]) {
    this.renderSortButtons();
    clearChildren(this.listHost);
    if (!groups.length) {
      htmlEl("div", { class: "empty-hint" }, this.listHost,
             "no suspicious groups for this run");
      return;
    }
    const featureMax = FEATURES.map((f) => Math.max(1e-9, ...groups.map(f.value)));
    for (const group of groups) {
      this.listHost.appendChild(this.renderRow(group, featureMax));
    }
  }

  private renderRow(group: GroupSummary, featureMax: number[]): HTMLElement {
    const row = htmlEl("div", {
      class: `group-row${group.group_id === this.state.groupId ? " selected" : ""}`,
      "data-group-id": group.group_id,
    });
    row.addEventListener("click", () => this.handlers.onGroupSelect(group.group_id));

    const svg = svgEl("svg", {
      class: "glyph", width: GLYPH_WIDTH + 170, height: GLYPH_HEIGHT,
      viewBox: `0 0 ${GLYPH_WIDTH + 170} ${GLYPH_HEIGHT}`,
    }, row);

    const traders = group.traders;
    const gap = GLYPH_WIDTH / (traders.length + 1);
    const xOf = new Map(traders.map((t, i) => [t, gap * (i + 1)]));
    svgEl("line", {
      x1: gap * 0.5, y1: BASELINE, x2: GLYPH_WIDTH - gap * 0.25, y2: BASELINE,
      stroke: "#bbb",
    }, svg);

    const maxArc = Math.max(1e-9, ...group.arcs.map((a) => a.amount));
    for (const arc of group.arcs) {
      const x1 = xOf.get(arc.src);
      const x2 = xOf.get(arc.dst);
      if (x1 === undefined || x2 === undefined) continue;
      const leftToRight = x1 < x2;
      const r = Math.abs(x2 - x1) / 2;
      // sweep 0 bows toward -y when traveling +x and toward +y when traveling
      // -x, which puts left-to-right cash flows above the baseline and the
      // reverse below
      const path = svgEl("path", {
        class: `glyph-arc ${leftToRight ? "arc-above" : "arc-below"}`,
        d: `M ${x1} ${BASELINE} A ${r} ${r * 0.8} 0 0 0 ${x2} ${BASELINE}`,
        fill: "none",
        stroke: "#2c7fb8",
        "stroke-width": 1 + 3 * (arc.amount / maxArc),
        "data-src": arc.src,
        "data-dst": arc.dst,
        "data-amount": arc.amount,
      }, svg);
      titleTip(path, `${arc.src} pays ${arc.dst}: ${arc.amount.toFixed(2)} over ${arc.n_invoices} invoices`);
    }

    for (const trader of traders) {
      const node = svgEl("circle", {
        class: "glyph-node",
        cx: xOf.get(trader)!, cy: BASELINE, r: 5,
        fill: "#fff", stroke: "#2c7fb8", "stroke-width": 1.5,
        "data-trader-id": trader,
      }, svg);
      titleTip(node, trader);
      node.addEventListener("mouseenter", () => this.handlers.onTraderHover(trader, true));
      node.addEventListener("mouseleave", () => this.handlers.onTraderHover(trader, false));
    }

    FEATURES.forEach((feature, i) => {
      const y = 8 + i * 18;
      const value = feature.value(group);
      const width = 90 * (value / featureMax[i]);
      svgEl("rect", {
        class: "feature-bar", x: GLYPH_WIDTH + 10, y, width: Math.max(width, 0.5), height: 12,
        fill: "#a6bddb", "data-feature": feature.key, "data-value": value,
      }, svg);
      const text = svgEl("text", {
        class: "feature-value", x: GLYPH_WIDTH + 104, y: y + 10, "font-size": 10,
        "data-feature": feature.key,
      }, svg);
      text.textContent = `${feature.label} ${feature.key === "rpt_amount" ? value.toFixed(2) : value}`;
    });
    return row;
  }

  highlightRow(groupId: string | null) {
    for (const row of this.listHost.querySelectorAll(".group-row")) {
      row.classList.toggle("selected", row.getAttribute("data-group-id") === groupId);
    }
  }
}
