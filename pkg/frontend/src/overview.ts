/** Live overview: every applicable chart option rendered from raw data.

Scalar charts sit in a grid on top, complex-object charts in a row below.
Recommendation frames outline option blocks in their task's color, dashed
when marginal. Clicking a small multiple opens the detail view with its
switches as toggle groups.
*/

import {
  CELL_SIZE,
  VIEW_SIZE,
  imageTiles,
  matrixChart,
  pcChart,
  rugChart,
  scatterChart,
  seriesChart,
  type ChartSize,
  type RunMarkOptions,
} from "./charts.js";
import { MDMV_OPTIONS, OPTION_LABELS, type Controller } from "./controller.js";
import type { CellJson, FrameJson, OverviewPayload, SwitchJson } from "./state.js";

const SERIES_PREVIEW_LIMIT = 12;

function columnsOf(payload: OverviewPayload, names: string[]) {
  return names.map((name) => ({ name, values: payload.data.columns[name] ?? [] }));
}

function previewSeries(
  payload: OverviewPayload,
  objectDim: string,
): Record<string, number[]> {
  const rows = payload.data.objects[objectDim];
  if (!rows || typeof rows[0] === "string") return {};
  const keep = new Set<number>(payload.highlights.preselected);
  if (payload.highlights.selected !== null) keep.add(payload.highlights.selected);
  for (let run = 0; run < rows.length && keep.size < SERIES_PREVIEW_LIMIT; run++) keep.add(run);
  const out: Record<string, number[]> = {};
  for (const run of keep) out[String(run)] = rows[run] as number[];
  return out;
}

function imageItems(payload: OverviewPayload, objectDim: string, runs: number[]) {
  const refs = payload.data.objects[objectDim] as string[] | undefined;
  if (!refs) return [];
  return runs.filter((r) => r < refs.length).map((run) => ({ run, ref: refs[run] }));
}

/** Resolve a cell's encodings and draw it; switch overrides pick the
active dimension per channel without another server round trip. */
export function renderCellChart(
  cell: CellJson,
  payload: OverviewPayload,
  size: ChartSize,
  overrides: Record<string, string> = {},
): Element {
  const active = (channel: string, fallback: string | null) =>
    overrides[channel] ?? fallback;
  const opts: RunMarkOptions = {
    selected: payload.highlights.selected,
    preselected: payload.highlights.preselected,
  };
  const col = (name: string | null) => (name ? (payload.data.columns[name] ?? []) : []);

  switch (cell.option) {
    case "SP":
      return scatterChart(col(active("x", cell.x)), col(active("y", cell.y)), size, opts);
    case "wDCP":
      return scatterChart(col(active("x", cell.x)), col(active("y", cell.y)), size, {
        ...opts,
        pixel: true,
      });
    case "SPLOM":
    case "rSPLOM":
      return matrixChart(columnsOf(payload, cell.dims), size, opts);
    case "PSc": {
      const axes = cell.axes ?? cell.dims;
      const x = axes[0];
      const y = axes.length > 1 ? axes[1] : axes[0];
      return scatterChart(col(x), col(y), size, { ...opts, pixel: true });
    }
    case "PC":
      return pcChart(columnsOf(payload, cell.axes ?? cell.dims), size, opts);
    case "Hist":
      return rugChart(col(active("x", cell.x)), size);
    case "Line1D":
    case "Box1D":
    case "CHist1D":
      return seriesChart(
        previewSeries(payload, cell.object_dim ?? ""),
        size,
        payload.highlights.selected,
      );
    case "Grid2D": {
      const refs = payload.data.objects[cell.object_dim ?? ""] as string[] | undefined;
      const runs = refs ? refs.map((_, i) => i) : [];
      return imageTiles(imageItems(payload, cell.object_dim ?? "", runs), "grid");
    }
    case "Jux2D":
      return imageTiles(
        imageItems(payload, cell.object_dim ?? "", payload.highlights.preselected),
        "jux",
      );
    case "Sup2D":
      return imageTiles(
        imageItems(payload, cell.object_dim ?? "", payload.highlights.preselected),
        "sup",
      );
    default:
      return document.createElement("div");
  }
}

function frameFor(c: Controller, option: string): FrameJson | undefined {
  return c.state.recommendation?.frames.find(
    (f) => f.target_kind === "vis_option" && f.target === option,
  );
}

function copyButton(c: Controller, cell: CellJson): HTMLElement {
  const button = document.createElement("button");
  button.className = "copy-view";
  button.textContent = "+ dashboard";
  button.title = "Copy this chart to the dashboard";
  button.addEventListener("click", (event) => {
    event.stopPropagation();
    void c.copyCellToDashboard(cell);
  });
  return button;
}

function optionBlock(c: Controller, option: string): HTMLElement {
  const payload = c.state.overview!;
  const block = document.createElement("div");
  block.className = "option-block";
  block.dataset.option = option;

  const head = document.createElement("h4");
  head.textContent = OPTION_LABELS[option] ?? option;
  block.appendChild(head);

  const frame = frameFor(c, option);
  if (frame) {
    block.classList.add("framed");
    if (frame.marginal) block.classList.add("frame-marginal");
    block.style.outlineColor = c.state.frameColors[frame.task] ?? "";
    block.dataset.framedTask = frame.task;
  }

  const layout = payload.layouts[option];
  if (layout) {
    const grid = document.createElement("div");
    grid.className = "smd-grid";
    grid.style.gridTemplateColumns = `repeat(${layout.shape[1]}, auto)`;
    layout.cells.forEach((row, r) => {
      row.forEach((cell, col) => {
        const holder = document.createElement("div");
        holder.className = "smd-cell";
        holder.dataset.row = String(r + 1);
        holder.dataset.col = String(col + 1);
        holder.appendChild(renderCellChart(cell, payload, CELL_SIZE));
        const caption = document.createElement("small");
        caption.textContent = cell.dims.join(", ") + (cell.color ? ` / ${cell.color}` : "");
        holder.appendChild(caption);
        holder.appendChild(copyButton(c, cell));
        holder.addEventListener("click", () => c.openDetail(option, r + 1, col + 1));
        grid.appendChild(holder);
      });
    });
    block.appendChild(grid);
  } else {
    const single = payload.singles[option];
    if (single) {
      const holder = document.createElement("div");
      holder.className = "smd-cell single";
      holder.appendChild(renderCellChart(single, payload, CELL_SIZE));
      holder.appendChild(copyButton(c, single));
      holder.addEventListener("click", () => c.openDetail(option, 0, 0));
      block.appendChild(holder);
    }
  }
  return block;
}

export function renderOverview(c: Controller): void {
  const root = c.els.overview;
  root.textContent = "";
  const payload = c.state.overview;
  if (!payload || payload.options.length === 0) {
    const prompt = document.createElement("p");
    prompt.className = "placeholder";
    prompt.textContent = payload
      ? "Drag dimensions into the channel fields to see charts."
      : "Load a run table to begin.";
    root.appendChild(prompt);
    return;
  }

  const mdmv = document.createElement("div");
  mdmv.className = "mdmv-section";
  const complex = document.createElement("div");
  complex.className = "complex-section";
  for (const option of payload.options) {
    (MDMV_OPTIONS.includes(option) ? mdmv : complex).appendChild(optionBlock(c, option));
  }
  if (mdmv.childElementCount > 0) root.appendChild(mdmv);
  if (complex.childElementCount > 0) root.appendChild(complex);
}

function switchGroup(c: Controller, sw: SwitchJson, overrides: Record<string, string>): HTMLElement {
  const group = document.createElement("div");
  group.className = "switch-group";
  group.dataset.channel = sw.channel;
  const label = document.createElement("span");
  label.textContent = `${sw.channel}:`;
  group.appendChild(label);
  const active = overrides[sw.channel] ?? sw.active;
  for (const candidate of sw.candidates) {
    const button = document.createElement("button");
    button.textContent = candidate;
    button.className = candidate === active ? "switch active" : "switch";
    button.addEventListener("click", () => c.switchDetail(sw.channel, candidate));
    group.appendChild(button);
  }
  return group;
}

export function renderDetail(c: Controller): void {
  const root = c.els.detail;
  root.textContent = "";
  const selection = c.state.detail;
  const payload = c.state.overview;
  if (!selection || !payload) return;

  let cell: (CellJson & { spec?: unknown }) | undefined;
  if (selection.row === 0) {
    cell = payload.singles[selection.option];
  } else {
    cell = payload.layouts[selection.option]?.cells[selection.row - 1]?.[selection.col - 1];
  }
  if (!cell) return;

  const head = document.createElement("h3");
  head.textContent = `${OPTION_LABELS[selection.option] ?? selection.option} detail`;
  root.appendChild(head);
  root.appendChild(renderCellChart(cell, payload, VIEW_SIZE, selection.overrides));
  for (const sw of cell.switches) root.appendChild(switchGroup(c, sw, selection.overrides));
}
