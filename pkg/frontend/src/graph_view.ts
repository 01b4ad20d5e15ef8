// Graph View: the selected group's ownership topology and related party
// transactions. Layers come from the server (investors above taxpayers);
// the client only permutes nodes within layers to reduce crossings. Border
// color encodes the entity kind, fill the period-end profit status, and an
// exclamation overlay marks taxpayers with evasion records.

import type { ChainEdge, GraphEdge, GraphPayload } from "./api";
import { INVESTMENT_EDGE_COLOR, NODE_BORDER, RPT_EDGE_COLOR, statusColor } from "./colors";
import { orderLayers } from "./layout";
import type { ViewState } from "./state";
import { clearChildren, htmlEl, svgEl, titleTip } from "./svg";

export interface GraphViewHandlers {
  onRptSelect(edge: GraphEdge): void;
  onRptHover(edge: GraphEdge, active: boolean): void;
}

const WIDTH = 460;
const ROW_HEIGHT = 86;
const NODE_RADIUS = 15;

export class GraphView {
  private host: HTMLElement;
  private payload: GraphPayload | null = null;

  constructor(container: HTMLElement, private state: ViewState,
              private handlers: GraphViewHandlers) {
    this.host = htmlEl("div", { class: "graph-host" }, container);
    this.renderEmpty();
  }

  renderEmpty() {
    this.payload = null;
    clearChildren(this.host);
    htmlEl("div", { class: "empty-hint" }, this.host, "select a group to inspect it");
  }

  render(payload: GraphPayload) {
    this.payload = payload;
    this.redraw();
  }

  // recolor after a scheme change without touching the data
  refreshColors() {
    if (this.payload) this.redraw();
  }

  private redraw() {
    const payload = this.payload!;
    clearChildren(this.host);
    const positions = orderLayers(
      payload.nodes.map((n) => ({ id: n.id, layer: n.layer })),
      payload.edges.map((e) => [e.src, e.dst]),
    );
    const nLayers = 1 + Math.max(0, ...payload.nodes.map((n) => n.layer));
    const height = nLayers * ROW_HEIGHT + 20;
    const svg = svgEl("svg", {
      class: "group-graph", width: WIDTH, height,
      viewBox: `0 0 ${WIDTH} ${height}`,
    }, this.host);

    const xy = (id: string): [number, number] => {
      const pos = positions.get(id)!;
      return [
        ((pos.index + 1) / (pos.layerSize + 1)) * WIDTH,
        pos.layer * ROW_HEIGHT + ROW_HEIGHT / 2,
      ];
    };

    const maxRptWeight = Math.max(
      1e-9, ...payload.edges.filter((e) => e.type === "rpt").map((e) => e.weight));
    for (const edge of payload.edges) {
      const [x1, y1] = xy(edge.src);
      const [x2, y2] = xy(edge.dst);
      const isRpt = edge.type === "rpt";
      const line = svgEl("line", {
        class: isRpt ? "edge-rpt" : "edge-investment",
        x1, y1, x2, y2,
        stroke: isRpt ? RPT_EDGE_COLOR : INVESTMENT_EDGE_COLOR,
        "stroke-width": isRpt ? 1.5 + 2.5 * (edge.weight / maxRptWeight) : 1.5,
        "data-src": edge.src,
        "data-dst": edge.dst,
        "data-type": edge.type,
      }, svg);
      if (isRpt) {
        titleTip(line, `${edge.src} pays ${edge.dst}: ${edge.weight.toFixed(2)} `
                       + `(${edge.invoice_ids?.length ?? 0} transactions)`);
        line.addEventListener("click", () => this.handlers.onRptSelect(edge));
        line.addEventListener("mouseenter", () => this.handlers.onRptHover(edge, true));
        line.addEventListener("mouseleave", () => this.handlers.onRptHover(edge, false));
      } else {
        titleTip(line, `${edge.src} holds ${(edge.weight * 100).toFixed(1)}% of ${edge.dst}`);
      }
    }

    for (const node of payload.nodes) {
      const [x, y] = xy(node.id);
      const g = svgEl("g", {
        class: "graph-node",
        "data-node-id": node.id,
        "data-kind": node.kind,
      }, svg);
      const circle = svgEl("circle", {
        cx: x, cy: y, r: NODE_RADIUS,
        fill: statusColor(node.profit_status, this.state.scheme),
        stroke: NODE_BORDER[node.kind],
      }, g);
      titleTip(circle, `${node.id} (${node.kind}, ${node.profit_status})`);
      if (node.has_evasion_record) {
        const mark = svgEl("text", {
          class: "evasion-mark", x, y: y + 4,
          "text-anchor": "middle", "font-weight": "bold", "font-size": 13,
        }, g);
        mark.textContent = "!";
      }
      const label = svgEl("text", {
        class: "node-label", x, y: y + NODE_RADIUS + 11,
        "text-anchor": "middle", "font-size": 9,
      }, g);
      label.textContent = node.id;
    }
  }

  highlightNode(nodeId: string, active: boolean) {
    const node = this.host.querySelector(`.graph-node[data-node-id="${nodeId}"]`);
    node?.classList.toggle("highlighted", active);
  }

  highlightOwners(ownerIds: string[], active: boolean) {
    for (const id of ownerIds) {
      const node = this.host.querySelector(`.graph-node[data-node-id="${id}"]`);
      node?.classList.toggle("owner-highlight", active);
    }
  }

  highlightChains(chains: ChainEdge[], active: boolean) {
    for (const edge of chains) {
      const line = this.host.querySelector(
        `.edge-investment[data-src="${edge.src}"][data-dst="${edge.dst}"]`);
      line?.classList.toggle("chain-highlight", active);
    }
  }
}
