/** Application wiring: DOM skeleton, server calls, and the render loop.

Every interaction handler follows the same pattern: send one request,
fold the response into `state`, repaint the affected regions. Errors
surface in the status line and shake the field that rejected a drop.
*/

import { ApiClient, ApiError, filterViewPayloads } from "./api.js";
import type { Controller, UiElements } from "./controller.js";
import { renderDashboard } from "./dashboard.js";
import { renderGuidance } from "./guidance.js";
import { renderDetail, renderOverview } from "./overview.js";
import { renderPanel, shakeField } from "./panel.js";
import { renderTaskbar } from "./taskbar.js";
import {
  TASK_ORDER,
  assignFrameColors,
  dropAllowed,
  emptyEncoding,
  initialState,
  type CellJson,
  type FieldName,
  type FiltersResponse,
  type RectJson,
  type TaskId,
  type UiState,
} from "./state.js";

const FIELD_LIST: FieldName[] = ["s1", "s2", "color", "opacity", "object"];

function section(tag: string, id: string, className: string): HTMLElement {
  const el = document.createElement(tag);
  el.id = id;
  el.className = className;
  return el;
}

function buildSkeleton(root: HTMLElement): UiElements {
  const header = section("header", "app-header", "app-header");
  const brand = document.createElement("strong");
  brand.textContent = "runviz";
  header.appendChild(brand);

  const csvInput = document.createElement("input");
  csvInput.type = "file";
  csvInput.id = "csv-file";
  csvInput.accept = ".csv";
  const sidecarInput = document.createElement("input");
  sidecarInput.type = "file";
  sidecarInput.id = "sidecar-file";
  sidecarInput.accept = ".json";
  const loadButton = document.createElement("button");
  loadButton.id = "load-btn";
  loadButton.textContent = "load";
  const status = section("span", "status", "status");
  header.appendChild(csvInput);
  header.appendChild(sidecarInput);
  header.appendChild(loadButton);
  header.appendChild(status);
  root.appendChild(header);

  const body = section("div", "app-body", "app-body");
  const panel = section("aside", "panel", "panel");
  const main = section("main", "app-main", "app-main");
  const taskbar = section("div", "taskbar", "taskbar");
  const overview = section("div", "overview", "overview");
  const detail = section("div", "detail", "detail");
  main.appendChild(taskbar);
  main.appendChild(overview);
  main.appendChild(detail);
  const guidance = section("aside", "guidance", "guidance");
  body.appendChild(panel);
  body.appendChild(main);
  body.appendChild(guidance);
  root.appendChild(body);

  const dashboard = section("section", "dashboard", "dashboard");
  root.appendChild(dashboard);

  return { status, panel, taskbar, overview, detail, guidance, dashboard };
}

export class App implements Controller {
  readonly state: UiState = initialState();
  readonly els: UiElements;
  private errorTimer: ReturnType<typeof setTimeout> | null = null;

  constructor(
    root: HTMLElement,
    readonly api: ApiClient,
  ) {
    this.els = buildSkeleton(root);
    this.wireHeader(root);
    this.renderAll();
  }

  private wireHeader(root: HTMLElement): void {
    const csvInput = root.querySelector<HTMLInputElement>("#csv-file");
    const sidecarInput = root.querySelector<HTMLInputElement>("#sidecar-file");
    const loadButton = root.querySelector<HTMLButtonElement>("#load-btn");
    loadButton?.addEventListener("click", () => {
      const csvFile = csvInput?.files?.[0];
      if (!csvFile) {
        this.showError("pick a run table CSV first");
        return;
      }
      void (async () => {
        const csv = await csvFile.text();
        const sidecarFile = sidecarInput?.files?.[0];
        const sidecar = sidecarFile ? JSON.parse(await sidecarFile.text()) : undefined;
        await this.loadData(csv, sidecar);
      })().catch((err) => this.fail(err));
    });
  }

  /** Create a session from CSV text and pull the initial overview + doc. */
  async loadData(csv: string, sidecar?: unknown): Promise<void> {
    try {
      const summary = await this.api.createSession(csv, sidecar);
      this.state.sessionId = summary.id;
      this.state.dimensions = summary.dimensions;
      const [overview, doc] = await Promise.all([
        this.api.overview(summary.id),
        this.api.exportDashboard(summary.id),
      ]);
      this.state.overview = overview;
      this.state.encoding = overview.encoding;
      this.state.doc = doc;
      this.state.passCount = summary.run_count;
      this.els.status.textContent = `${summary.run_count} runs, ${summary.dimensions.length} dimensions`;
      this.renderAll();
    } catch (err) {
      this.fail(err);
      throw err;
    }
  }

  async dropDimension(dim: string, field: FieldName | null): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    const dimension = this.state.dimensions.find((d) => d.name === dim);
    if (!dimension) return;
    if (field !== null && !dropAllowed(dimension, field)) {
      shakeField(this.els.panel, field, `${dim} (${dimension.dtype}) cannot go on ${field}`);
      return;
    }
    const next = emptyEncoding();
    for (const f of FIELD_LIST) {
      next[f] = this.state.encoding[f].filter((d) => d !== dim);
    }
    if (field !== null) next[field].push(dim);
    try {
      const payload = await this.api.setEncoding(id, next);
      this.state.overview = payload;
      this.state.encoding = payload.encoding;
      this.state.detail = null;
      if (this.state.activeTasks.length > 1) {
        const rec = await this.api.setTasks(id, this.state.activeTasks);
        this.state.recommendation = rec;
        this.state.frameColors = assignFrameColors(rec.tasks);
      }
      this.renderAll();
    } catch (err) {
      if (field !== null && err instanceof ApiError) {
        shakeField(this.els.panel, field, err.message);
      }
      this.fail(err);
    }
  }

  async toggleTask(task: TaskId): Promise<void> {
    const id = this.state.sessionId;
    if (!id || task === "optimization") return;
    const active = new Set(this.state.activeTasks);
    if (active.has(task)) {
      active.delete(task);
    } else {
      active.add(task);
    }
    active.add("optimization");
    const ordered = TASK_ORDER.filter((t) => active.has(t));
    try {
      const rec = await this.api.setTasks(id, ordered);
      this.state.recommendation = rec;
      this.state.activeTasks = rec.tasks;
      this.state.frameColors = assignFrameColors(rec.tasks);
      this.renderAll();
    } catch (err) {
      this.fail(err);
    }
  }

  openDetail(option: string, row: number, col: number): void {
    this.state.detail = { option, row, col, overrides: {} };
    renderDetail(this);
  }

  switchDetail(channel: string, dim: string): void {
    if (!this.state.detail) return;
    this.state.detail.overrides[channel] = dim;
    renderDetail(this);
  }

  async copyCellToDashboard(cell: CellJson): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    try {
      this.state.doc = await this.api.addView(id, { cell });
      await this.refreshViews();
      renderDashboard(this);
    } catch (err) {
      this.fail(err);
    }
  }

  async copyExternalToDashboard(blob: Record<string, unknown>): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    try {
      this.state.doc = await this.api.addView(id, { external: blob });
      await this.refreshViews();
      renderDashboard(this);
    } catch (err) {
      this.fail(err);
    }
  }

  /** One filter round trip; the response repaints every placed view. */
  async dragSlider(dim: string, lo: number, hi: number): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    try {
      const response = await this.api.setFilters(id, { ranges: { [dim]: [lo, hi] } });
      this.applyFilters(response);
      const doc = this.state.doc;
      if (doc) {
        doc.filter_state.ranges[dim] = [lo, hi];
        const slider = doc.sliders.find((s) => s.dimension === dim);
        if (slider) slider.current = [lo, hi];
      }
      renderDashboard(this);
    } catch (err) {
      this.fail(err);
    }
  }

  async selectRun(run: number | null): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    try {
      const response = await this.api.setFilters(id, { selected_run: run });
      this.applyFilters(response);
      this.state.selectedRun = run;
      if (this.state.doc) this.state.doc.filter_state.selected_run = run;
      if (this.state.overview) this.state.overview.highlights.selected = run;
      renderDashboard(this);
      renderOverview(this);
      renderDetail(this);
    } catch (err) {
      this.fail(err);
    }
  }

  async setMode(mode: "edit" | "analyze"): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    try {
      const response = await this.api.setMode(id, mode);
      if (this.state.doc) this.state.doc.mode = response.mode;
      renderDashboard(this);
    } catch (err) {
      this.fail(err);
    }
  }

  async moveView(viewId: number, rect: RectJson): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    try {
      this.state.doc = await this.api.patchView(id, viewId, { rect });
      renderDashboard(this);
    } catch (err) {
      this.fail(err);
    }
  }

  async patchViewStyle(viewId: number, patch: Record<string, unknown>): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    try {
      this.state.doc = await this.api.patchView(id, viewId, patch);
      await this.refreshViews();
      renderDashboard(this);
    } catch (err) {
      this.fail(err);
    }
  }

  async removeView(viewId: number): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    try {
      this.state.doc = await this.api.deleteView(id, viewId);
      this.state.viewPayloads.delete(viewId);
      if (this.state.styleEditorView === viewId) this.state.styleEditorView = null;
      renderDashboard(this);
    } catch (err) {
      this.fail(err);
    }
  }

  showError(message: string): void {
    this.els.status.textContent = message;
    this.els.status.classList.add("error");
    if (this.errorTimer) clearTimeout(this.errorTimer);
    this.errorTimer = setTimeout(() => {
      this.els.status.textContent = "";
      this.els.status.classList.remove("error");
    }, 4000);
  }

  /** Re-pull payloads for every placed view with an empty filter delta. */
  private async refreshViews(): Promise<void> {
    const id = this.state.sessionId;
    if (!id) return;
    this.applyFilters(await this.api.setFilters(id, {}));
  }

  private applyFilters(response: FiltersResponse): void {
    this.state.viewPayloads = filterViewPayloads(response);
    this.state.passCount = response.pass_count;
  }

  private fail(err: unknown): void {
    if (err instanceof ApiError) {
      this.showError(`${err.code}: ${err.message}`);
    } else {
      this.showError(String(err));
    }
  }

  renderAll(): void {
    renderPanel(this);
    renderTaskbar(this);
    renderOverview(this);
    renderDetail(this);
    renderGuidance(this);
    renderDashboard(this);
  }
}

export function boot(root: HTMLElement, base = ""): App {
  return new App(root, new ApiClient(base));
}
