// Wires the four views together. All data flows Control Panel -> Overview ->
// Graph -> Detail; selections propagate down that chain and are cleared when
// anything upstream changes, and responses superseded by a newer selection
// are dropped.

import { ApiClient, ApiError, GraphEdge } from "./api";
import { ControlPanel } from "./control_panel";
import { DetailView } from "./detail_view";
import { GraphView } from "./graph_view";
import { GroupOverview } from "./group_overview";
import { shiftAnchor, SortCriterion, ViewState } from "./state";

export class App {
  readonly state = new ViewState();
  readonly controlPanel: ControlPanel;
  readonly groupOverview: GroupOverview;
  readonly graphView: GraphView;
  readonly detailView: DetailView;

  private epochs = { groups: 0, graph: 0, detail: 0 };

  constructor(root: Document | HTMLElement, private api: ApiClient) {
    const host = (id: string) => {
      const el = root.querySelector(`#${id}`);
      if (!el) throw new Error(`missing container #${id}`);
      return el as HTMLElement;
    };
    this.controlPanel = new ControlPanel(host("control-panel"), this.state, {
      onPeriodSelect: () => {},
      onRun: () => void this.runDetection(),
      onParamsChanged: () => void this.runDetection(),
      onSearch: (id) => void this.locateTaxpayer(id),
    });
    this.groupOverview = new GroupOverview(host("group-overview"), this.state, {
      onSort: (criterion) => void this.sortGroups(criterion),
      onGroupSelect: (groupId) => void this.selectGroup(groupId),
      onTraderHover: (taxpayerId, active) => this.graphView.highlightNode(taxpayerId, active),
    });
    this.graphView = new GraphView(host("graph-view"), this.state, {
      onRptSelect: (edge) => void this.selectRptEdge(edge),
      onRptHover: (edge, active) => void this.hoverRptEdge(edge, active),
    });
    this.detailView = new DetailView(host("detail-view"), this.state, {
      onGranularity: (granularity) => void this.setGranularity(granularity),
      onNavigate: (steps) => void this.navigateDetail(steps),
      onToggleArrows: () => this.toggleArrows(),
      onToggleScheme: () => this.toggleScheme(),
    });
  }

  async init() {
    const summary = await this.api.summary();
    this.state.setPeriod(summary.start, summary.end);
    this.controlPanel.render(summary);
  }

  async runDetection() {
    const handle = await this.api.postRun(this.state.params);
    this.state.selectRun(handle.run_id);
    // downstream selections are gone; empty the dependent views
    this.graphView.renderEmpty();
    this.detailView.renderEmpty();
    await this.refreshGroups();
    return handle;
  }

  private async refreshGroups() {
    if (!this.state.runId) return;
    const epoch = ++this.epochs.groups;
    const list = await this.api.groups(this.state.runId, this.state.sort,
                                       this.state.descending);
    if (epoch !== this.epochs.groups) return; // superseded meanwhile
    this.groupOverview.render(list.groups);
  }

  async sortGroups(criterion: SortCriterion) {
    this.state.sort = criterion;
    await this.refreshGroups();
  }

  async selectGroup(groupId: string) {
    if (!this.state.runId) return;
    this.state.selectGroup(groupId);
    this.groupOverview.highlightRow(groupId);
    this.detailView.renderEmpty();
    const epoch = ++this.epochs.graph;
    const payload = await this.api.graph(this.state.runId, groupId);
    if (epoch !== this.epochs.graph || this.state.groupId !== groupId) return;
    this.graphView.render(payload);
  }

  async selectRptEdge(edge: GraphEdge) {
    const rptId = edge.invoice_ids?.[0];
    if (rptId) await this.selectRpt(rptId);
  }

  async selectRpt(rptId: string) {
    if (!this.state.runId || !this.state.groupId) return;
    this.state.selectRpt(rptId);
    const epoch = ++this.epochs.detail;
    const payload = await this.api.detail(
      this.state.runId, this.state.groupId, rptId, this.state.granularity,
      this.state.anchor ?? undefined);
    if (epoch !== this.epochs.detail || this.state.rptId !== rptId) return;
    this.detailView.render(payload);
  }

  async hoverRptEdge(edge: GraphEdge, active: boolean) {
    this.graphView.highlightOwners(edge.common_owners ?? [], active);
    if (!active || !edge.invoice_ids?.length) return;
    if (!this.state.runId || !this.state.groupId) return;
    // chains come from the detail endpoint; highlight them when they land
    const detail = await this.api.detail(
      this.state.runId, this.state.groupId, edge.invoice_ids[0], this.state.granularity);
    for (const owner of detail.owners) {
      this.graphView.highlightChains(owner.chain_to_buyer, true);
      this.graphView.highlightChains(owner.chain_to_seller, true);
    }
  }

  async setGranularity(granularity: "quarter" | "year") {
    if (this.state.granularity === granularity) return;
    this.state.granularity = granularity;
    this.state.anchor = null;
    if (this.state.rptId) {
      await this.selectRpt(this.state.rptId);
    } else {
      this.detailView.refreshColors();
    }
  }

  async navigateDetail(steps: number) {
    if (!this.state.rptId) return;
    const current = this.state.anchor
      ?? this.detailWindowAnchor()
      ?? null;
    if (!current) return;
    this.state.anchor = shiftAnchor(current, this.state.granularity, steps);
    try {
      await this.selectRpt(this.state.rptId);
    } catch (err) {
      if (err instanceof ApiError && err.code === "anchor_outside_range") {
        this.state.anchor = current; // stay on the last valid window
        return;
      }
      throw err;
    }
  }

  private detailWindowAnchor(): string | null {
    const cell = document.querySelector(".detail-calendars .day-cell");
    return cell?.getAttribute("data-date") ?? null;
  }

  toggleArrows() {
    this.state.arrowsVisible = !this.state.arrowsVisible;
    this.detailView.setArrowsVisible(this.state.arrowsVisible);
  }

  toggleScheme() {
    this.state.scheme = this.state.scheme === "brown-blue-green"
      ? "red-yellow-green" : "brown-blue-green";
    // pure recolor: the views redraw from their cached payloads, no requests
    this.graphView.refreshColors();
    this.detailView.refreshColors();
  }

  async locateTaxpayer(taxpayerId: string) {
    try {
      const result = await this.api.taxpayer(taxpayerId, this.state.runId ?? undefined);
      this.controlPanel.renderLocate(result);
    } catch (err) {
      if (err instanceof ApiError) {
        this.controlPanel.renderLocate(null, `${taxpayerId}: ${err.message}`);
        return;
      }
      throw err;
    }
  }
}
