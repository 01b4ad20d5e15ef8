// Control Panel: daily related-party amount bar chart plus the fusion
// parameter widgets. Clicking a bar selects that day's quarter (the typical
// tax period); dragging across bars selects the exact span.

import type { DailySummary, TaxpayerLocate } from "./api";
import { quarterOf, ViewState } from "./state";
import { clearChildren, htmlEl, svgEl } from "./svg";

export interface ControlPanelHandlers {
  onPeriodSelect(start: string, end: string): void;
  onRun(): void;
  onParamsChanged(): void;
  onSearch(taxpayerId: string): void;
}

const BAR_WIDTH = 3;
const CHART_HEIGHT = 90;

export class ControlPanel {
  private chartHost: HTMLElement;
  private widgetHost: HTMLElement;
  private locateHost: HTMLElement;
  private periodLabel: HTMLElement;
  private brushStart: string | null = null;

  constructor(container: HTMLElement, private state: ViewState,
              private handlers: ControlPanelHandlers) {
    this.chartHost = htmlEl("div", { class: "daily-chart" }, container);
    this.periodLabel = htmlEl("div", {}, container);
    this.widgetHost = htmlEl("div", { class: "widgets" }, container);
    this.locateHost = htmlEl("div", { class: "locate-result" }, container);
    this.renderWidgets();
  }

  render(summary: DailySummary) {
    clearChildren(this.chartHost);
    const days = summary.days;
    const maxAmount = Math.max(1e-9, ...days.map((d) => d.amount));
    const svg = svgEl("svg", {
      class: "daily-bars",
      width: days.length * BAR_WIDTH,
      height: CHART_HEIGHT,
      viewBox: `0 0 ${days.length * BAR_WIDTH} ${CHART_HEIGHT}`,
    }, this.chartHost);

    days.forEach((day, i) => {
      const h = Math.max(day.amount > 0 ? 1 : 0, (day.amount / maxAmount) * (CHART_HEIGHT - 4));
      const bar = svgEl("rect", {
        class: "day-bar",
        "data-date": day.date,
        "data-amount": day.amount,
        x: i * BAR_WIDTH,
        y: CHART_HEIGHT - h,
        width: BAR_WIDTH - 0.5,
        height: Math.max(h, 0.5),
        fill: "#74a9cf",
      }, svg);
      bar.addEventListener("click", () => {
        const quarter = quarterOf(day.date);
        this.setPeriod(quarter.start, quarter.end);
      });
      bar.addEventListener("mousedown", () => {
        this.brushStart = day.date;
      });
      bar.addEventListener("mouseup", () => {
        if (this.brushStart !== null && this.brushStart !== day.date) {
          const [start, end] = [this.brushStart, day.date].sort();
          this.setPeriod(start, end);
        }
        this.brushStart = null;
      });
    });
    this.updatePeriodLabel();
  }

  private setPeriod(start: string, end: string) {
    this.state.setPeriod(start, end);
    this.updatePeriodLabel();
    this.handlers.onPeriodSelect(start, end);
  }

  private updatePeriodLabel() {
    clearChildren(this.periodLabel);
    htmlEl("span", {}, this.periodLabel, "period:");
    htmlEl("span", { class: "period-label" }, this.periodLabel,
           `${this.state.periodStart} .. ${this.state.periodEnd}`);
  }

  private numberWidget(label: string, name: string, value: number, step: string,
                       apply: (v: number) => void) {
    const wrap = htmlEl("label", {}, this.widgetHost, label);
    const input = htmlEl("input", {
      type: "number", name, step, value: String(value), min: step === "1" ? "1" : "0.01",
    }, wrap);
    input.addEventListener("change", () => {
      apply(Number(input.value));
      this.handlers.onParamsChanged();
    });
  }

  private renderWidgets() {
    this.numberWidget("max txn chain", "max-txn-chain", this.state.maxTxnChain, "1",
                      (v) => { this.state.maxTxnChain = v; });
    this.numberWidget("max ctrl chain", "max-ctrl-chain", this.state.maxCtrlChain, "1",
                      (v) => { this.state.maxCtrlChain = v; });
    this.numberWidget("min ratio", "min-ratio", this.state.minRatio, "0.01",
                      (v) => { this.state.minRatio = v; });

    const run = htmlEl("button", { class: "run-button" }, this.widgetHost, "Run detection");
    run.addEventListener("click", () => this.handlers.onRun());

    const search = htmlEl("input", {
      class: "taxpayer-search", placeholder: "taxpayer ID",
    }, this.widgetHost);
    const go = htmlEl("button", { class: "search-button" }, this.widgetHost, "Locate");
    go.addEventListener("click", () => {
      if (search.value.trim()) this.handlers.onSearch(search.value.trim());
    });
  }

  renderLocate(result: TaxpayerLocate | null, error?: string) {
    clearChildren(this.locateHost);
    if (error) {
      htmlEl("span", { class: "locate-error" }, this.locateHost, error);
      return;
    }
    if (!result) return;
    if (!result.found) {
      htmlEl("span", { class: "locate-pruned" }, this.locateHost,
             `${result.id}: pruned from the network (${result.prune_reason ?? "unknown"})`);
    } else if (result.group_id) {
      htmlEl("span", { class: "locate-group", "data-group-id": result.group_id },
             this.locateHost, `${result.id}: in group ${result.group_id}`);
    } else {
      htmlEl("span", {}, this.locateHost,
             `${result.id}: in the network, no group under this run`);
    }
  }
}
