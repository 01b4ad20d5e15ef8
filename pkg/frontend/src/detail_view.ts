// Detail View: two calendar heatmaps showing the cumulative daily profit of
// the two traders behind the selected transaction. The background color of a
// day cell is a diverging scale anchored at zero, normalized per taxpayer per
// period; transaction dots sit on their dates, sized by amount and filled by
// the profit-or-loss effect on that taxpayer, with toggleable arrows along
// the cash flow between paired dots.

import type { DetailPayload, Granularity, SeriesPayload } from "./api";
import { divergingColor, maxAbsOf, RAMPS } from "./colors";
import type { ViewState } from "./state";
import { clearChildren, dayOffset, htmlEl, svgEl, titleTip, weekdayOf } from "./svg";

export interface DetailViewHandlers {
  onGranularity(granularity: Granularity): void;
  onNavigate(steps: number): void;
  onToggleArrows(): void;
  onToggleScheme(): void;
}

const CELL = 13;
const CAL_TOP = 26;
const CAL_GAP = 40;

export class DetailView {
  private toolbar: HTMLElement;
  private host: HTMLElement;
  private payload: DetailPayload | null = null;

  constructor(container: HTMLElement, private state: ViewState,
              private handlers: DetailViewHandlers) {
    this.toolbar = htmlEl("div", { class: "toolbar widgets" }, container);
    this.host = htmlEl("div", { class: "detail-host" }, container);
    this.renderToolbar();
    this.renderEmpty();
  }

  private renderToolbar() {
    clearChildren(this.toolbar);
    for (const granularity of ["quarter", "year"] as const) {
      const btn = htmlEl("button", {
        class: `granularity-button${this.state.granularity === granularity ? " active" : ""}`,
        "data-granularity": granularity,
      }, this.toolbar, granularity);
      btn.addEventListener("click", () => this.handlers.onGranularity(granularity));
    }
    const prev = htmlEl("button", { class: "nav-prev" }, this.toolbar, "<");
    prev.addEventListener("click", () => this.handlers.onNavigate(-1));
    const next = htmlEl("button", { class: "nav-next" }, this.toolbar, ">");
    next.addEventListener("click", () => this.handlers.onNavigate(1));

    const arrows = htmlEl("button", {
      class: `arrows-toggle${this.state.arrowsVisible ? " active" : ""}`,
    }, this.toolbar, "arrows");
    arrows.addEventListener("click", () => this.handlers.onToggleArrows());

    const scheme = htmlEl("button", { class: "scheme-toggle" }, this.toolbar,
                          `scheme: ${this.state.scheme}`);
    scheme.addEventListener("click", () => this.handlers.onToggleScheme());
  }

  renderEmpty() {
    this.payload = null;
    this.renderToolbar();
    clearChildren(this.host);
    htmlEl("div", { class: "empty-hint" }, this.host,
           "click a related party transaction in the graph");
  }

  render(payload: DetailPayload) {
    this.payload = payload;
    this.redraw();
  }

  refreshColors() {
    if (this.payload) this.redraw();
    else this.renderToolbar();
  }

  setArrowsVisible(visible: boolean) {
    this.renderToolbar();
    this.host.querySelector(".arrow-layer")?.classList.toggle("hidden", !visible);
  }

  private calendarGeometry(payload: DetailPayload) {
    const firstWeekday = weekdayOf(payload.window_start);
    const nDays = payload.buyer.values.length;
    const nWeeks = Math.ceil((firstWeekday + nDays) / 7);
    return { firstWeekday, nDays, nWeeks };
  }

  private cellCenter(dateIso: string, calTop: number, payload: DetailPayload): [number, number] {
    const { firstWeekday } = this.calendarGeometry(payload);
    const idx = dayOffset(dateIso, payload.window_start) + firstWeekday;
    const col = Math.floor(idx / 7);
    const row = idx % 7;
    return [col * CELL + CELL / 2, calTop + row * CELL + CELL / 2];
  }

  private redraw() {
    const payload = this.payload!;
    this.renderToolbar();
    clearChildren(this.host);
    const { nWeeks } = this.calendarGeometry(payload);
    const calHeight = 7 * CELL;
    const sellerTop = CAL_TOP + calHeight + CAL_GAP;
    const width = Math.max(nWeeks * CELL + 10, 260);
    const height = sellerTop + calHeight + 12;
    const svg = svgEl("svg", {
      class: "detail-calendars", width, height, viewBox: `0 0 ${width} ${height}`,
    }, this.host);

    this.renderCalendar(svg, payload.buyer, CAL_TOP, "buyer", payload);
    this.renderCalendar(svg, payload.seller, sellerTop, "seller", payload);

    const calTopOf = (taxpayerId: string) =>
      taxpayerId === payload.buyer.taxpayer_id ? CAL_TOP : sellerTop;

    const maxDot = Math.max(1e-9, ...payload.dots.map((d) => d.amount));
    const ramp = RAMPS[this.state.scheme];
    const dotLayer = svgEl("g", { class: "dot-layer" }, svg);
    for (const dot of payload.dots) {
      const [cx, cy] = this.cellCenter(dot.date, calTopOf(dot.taxpayer_id), payload);
      const circle = svgEl("circle", {
        class: "rpt-dot",
        cx, cy,
        r: 1.8 + 3.6 * Math.sqrt(dot.amount / maxDot),
        fill: dot.effect === "profit" ? ramp.positive : ramp.negative,
        stroke: "#333", "stroke-width": 0.5,
        "data-invoice-id": dot.invoice_id,
        "data-taxpayer": dot.taxpayer_id,
        "data-amount": dot.amount,
        "data-effect": dot.effect,
        "data-paired": String(dot.paired),
      }, dotLayer);
      titleTip(circle,
               `${dot.invoice_id} on ${dot.date}: ${dot.amount.toFixed(2)} `
               + `${dot.direction === "in" ? "received by" : "paid by"} ${dot.taxpayer_id}`);
    }

    const arrowLayer = svgEl("g", {
      class: `arrow-layer${this.state.arrowsVisible ? "" : " hidden"}`,
    }, svg);
    const marker = svgEl("marker", {
      id: "arrow-head", viewBox: "0 0 6 6", refX: 5, refY: 3,
      markerWidth: 5, markerHeight: 5, orient: "auto",
    }, svg);
    svgEl("path", { d: "M 0 0 L 6 3 L 0 6 z", fill: "#555" }, marker);
    for (const arrow of payload.arrows) {
      const dot = payload.dots.find(
        (d) => d.invoice_id === arrow.invoice_id && d.taxpayer_id === arrow.src_taxpayer);
      if (!dot) continue;
      const [x1, y1] = this.cellCenter(dot.date, calTopOf(arrow.src_taxpayer), payload);
      const [x2, y2] = this.cellCenter(dot.date, calTopOf(arrow.dst_taxpayer), payload);
      svgEl("line", {
        class: "rpt-arrow",
        x1, y1, x2, y2,
        stroke: "#555", "stroke-width": 1, "marker-end": "url(#arrow-head)",
        "data-invoice-id": arrow.invoice_id,
      }, arrowLayer);
    }
  }

  private renderCalendar(svg: SVGElement, series: SeriesPayload, top: number,
                         role: "buyer" | "seller", payload: DetailPayload) {
    const { firstWeekday } = this.calendarGeometry(payload);
    const header = svgEl("text", {
      class: `calendar-title calendar-${role}`, x: 0, y: top - 9, "font-size": 11,
    }, svg);
    header.textContent =
      `${role}: ${series.taxpayer_id} (${series.status} at period end)`;

    const maxAbs = maxAbsOf(series.values);
    series.values.forEach((value, i) => {
      const idx = i + firstWeekday;
      const col = Math.floor(idx / 7);
      const row = idx % 7;
      const dateIso = new Date(Date.parse(payload.window_start) + i * 86_400_000)
        .toISOString().slice(0, 10);
      const cell = svgEl("rect", {
        class: "day-cell",
        x: col * CELL, y: top + row * CELL,
        width: CELL - 1.5, height: CELL - 1.5,
        fill: divergingColor(value, maxAbs, this.state.scheme),
        "data-date": dateIso,
        "data-taxpayer": series.taxpayer_id,
        "data-value": value,
      }, svg);
      titleTip(cell, `${series.taxpayer_id} ${dateIso}: cumulative profit ${value.toFixed(2)}`);
    });
  }
}
