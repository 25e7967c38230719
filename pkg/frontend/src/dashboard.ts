/** Dashboard renderer: placed views, value sliders, and the mode toggle.

Edit mode exposes a hover menu per view (nudge, resize, restyle, remove)
plus drag-to-move on the title bar; analyze mode hides all of it and
leaves sliders and run selection. One slider drag issues exactly one
filter round trip and repaints every view from the response.
*/

import {
  VIEW_SIZE,
  boxSeriesChart,
  contourChart,
  cumulativeChart,
  histogramChart,
  imageTiles,
  matrixChart,
  pcChart,
  scatterChart,
  seriesChart,
  type BinJson,
  type BoxJson,
  type ContourJson,
  type ImageItem,
} from "./charts.js";
import { OPTION_LABELS, type Controller } from "./controller.js";
import type { RectJson, SliderJson, ViewPayloadJson, VisSpec } from "./state.js";

export const GRID_UNIT_PX = 50;

function asNumber(value: unknown, fallback: number): number {
  return typeof value === "number" ? value : fallback;
}

function passCountOf(entry: ViewPayloadJson): number | null {
  const p = entry.payload;
  if (Array.isArray(p.pass)) return p.pass.length;
  if (Array.isArray(p.runs)) return (p.runs as number[]).length;
  if (Array.isArray(p.bins)) {
    return (p.bins as BinJson[]).reduce((total, bin) => total + bin.pass, 0);
  }
  return null;
}

function runsChart(entry: ViewPayloadJson): Element {
  const spec = entry.spec as VisSpec;
  const payload = entry.payload;
  const columns = (payload.columns ?? {}) as Record<string, number[]>;
  const pass = new Set((payload.pass as number[]) ?? []);
  const opts = {
    pass,
    selected: (payload.selected as number | null) ?? null,
    preselected: (payload.preselected as number[]) ?? [],
  };
  const enc = spec.encodings as Record<string, unknown>;
  const axes = ((enc.axes as string[] | null) ?? []).map((name) => ({
    name,
    values: columns[name] ?? [],
  }));
  switch (spec.vis_type) {
    case "SPLOM":
    case "rSPLOM":
      return matrixChart(axes, VIEW_SIZE, opts);
    case "PC":
      return pcChart(axes, VIEW_SIZE, opts);
    case "PSc": {
      const x = axes[0]?.values ?? [];
      const y = (axes[1] ?? axes[0])?.values ?? [];
      return scatterChart(x, y, VIEW_SIZE, { ...opts, pixel: true });
    }
    default: {
      const x = columns[(enc.x as string) ?? ""] ?? [];
      const y = columns[(enc.y as string) ?? ""] ?? [];
      return scatterChart(x, y, VIEW_SIZE, opts);
    }
  }
}

function viewBody(entry: ViewPayloadJson): Element {
  const payload = entry.payload;
  switch (payload.kind) {
    case "runs":
      return runsChart(entry);
    case "contours": {
      const columns = (payload.columns ?? {}) as Record<string, number[]>;
      return contourChart(
        (payload.contours as ContourJson[]) ?? [],
        columns[payload.x as string] ?? [],
        columns[payload.y as string] ?? [],
        VIEW_SIZE,
        {
          pass: new Set((payload.pass as number[]) ?? []),
          selected: (payload.selected as number | null) ?? null,
        },
      );
    }
    case "histogram":
      return histogramChart((payload.bins as BinJson[]) ?? [], VIEW_SIZE);
    case "series":
      return seriesChart(
        (payload.series as Record<string, number[]>) ?? {},
        VIEW_SIZE,
        (payload.selected as number | null) ?? null,
      );
    case "box_series":
      return boxSeriesChart((payload.positions as BoxJson[]) ?? [], VIEW_SIZE);
    case "cumulative":
      return cumulativeChart(
        (payload.curves as Record<string, number[]>) ?? {},
        VIEW_SIZE,
        (payload.selected as number | null) ?? null,
      );
    case "images":
      return imageTiles((payload.items as ImageItem[]) ?? [], "grid");
    case "images_jux":
      return imageTiles((payload.items as ImageItem[]) ?? [], "jux");
    case "images_sup":
      return imageTiles((payload.items as ImageItem[]) ?? [], "sup");
    case "external": {
      const pre = document.createElement("pre");
      pre.className = "external-spec";
      pre.textContent = JSON.stringify(entry.spec, null, 2);
      return pre;
    }
    default: {
      const div = document.createElement("div");
      div.textContent = `no renderer for ${payload.kind}`;
      return div;
    }
  }
}

function styleEditor(c: Controller, viewId: number): HTMLElement {
  const view = c.state.doc?.views.find((v) => v.view_id === viewId);
  const style = (view?.style ?? {}) as Record<string, unknown>;
  const form = document.createElement("form");
  form.className = "style-editor";

  const binLabel = document.createElement("label");
  binLabel.textContent = "bins ";
  const bins = document.createElement("input");
  bins.type = "number";
  bins.name = "bin_count";
  bins.min = "1";
  bins.max = "64";
  bins.value = String(asNumber(style.bin_count, 10));
  binLabel.appendChild(bins);
  form.appendChild(binLabel);

  const sizeLabel = document.createElement("label");
  sizeLabel.textContent = "point size ";
  const pointSize = document.createElement("input");
  pointSize.type = "number";
  pointSize.name = "point_size";
  pointSize.min = "1";
  pointSize.max = "20";
  pointSize.value = String(asNumber(style.point_size, 3));
  sizeLabel.appendChild(pointSize);
  form.appendChild(sizeLabel);

  const schemeLabel = document.createElement("label");
  schemeLabel.textContent = "colors ";
  const scheme = document.createElement("select");
  scheme.name = "color_scheme";
  for (const name of ["sequential", "diverging", "categorical"]) {
    const option = document.createElement("option");
    option.value = name;
    option.textContent = name;
    if (style.color_scheme === name) option.selected = true;
    scheme.appendChild(option);
  }
  schemeLabel.appendChild(scheme);
  form.appendChild(schemeLabel);

  const hideLabel = document.createElement("label");
  const hide = document.createElement("input");
  hide.type = "checkbox";
  hide.name = "hide_filtered";
  hide.checked = style.hide_filtered === true;
  hideLabel.appendChild(hide);
  hideLabel.appendChild(document.createTextNode(" hide filtered"));
  form.appendChild(hideLabel);

  const apply = document.createElement("button");
  apply.type = "submit";
  apply.textContent = "apply";
  form.appendChild(apply);

  form.addEventListener("submit", (event) => {
    event.preventDefault();
    c.state.styleEditorView = null;
    void c.patchViewStyle(viewId, {
      bin_count: Number(bins.value),
      point_size: Number(pointSize.value),
      color_scheme: scheme.value,
      hide_filtered: hide.checked,
    });
  });
  return form;
}

function viewMenu(c: Controller, viewId: number, rect: RectJson): HTMLElement {
  const menu = document.createElement("div");
  menu.className = "view-menu";
  const nudge = (label: string, dx: number, dy: number, dw: number, dh: number) => {
    const button = document.createElement("button");
    button.textContent = label;
    button.title = `${label} ${viewId}`;
    button.addEventListener("click", (event) => {
      event.stopPropagation();
      const next = {
        x: Math.max(0, rect.x + dx),
        y: Math.max(0, rect.y + dy),
        w: Math.max(1, rect.w + dw),
        h: Math.max(1, rect.h + dh),
      };
      void c.moveView(viewId, next);
    });
    menu.appendChild(button);
  };
  nudge("left", -1, 0, 0, 0);
  nudge("right", 1, 0, 0, 0);
  nudge("up", 0, -1, 0, 0);
  nudge("down", 0, 1, 0, 0);
  nudge("grow", 0, 0, 1, 1);
  nudge("shrink", 0, 0, -1, -1);

  const style = document.createElement("button");
  style.textContent = "style";
  style.className = "menu-style";
  style.addEventListener("click", (event) => {
    event.stopPropagation();
    c.state.styleEditorView = c.state.styleEditorView === viewId ? null : viewId;
    renderDashboard(c);
  });
  menu.appendChild(style);

  const remove = document.createElement("button");
  remove.textContent = "remove";
  remove.className = "menu-remove";
  remove.addEventListener("click", (event) => {
    event.stopPropagation();
    void c.removeView(viewId);
  });
  menu.appendChild(remove);
  return menu;
}

function attachTitleDrag(
  c: Controller,
  title: HTMLElement,
  viewId: number,
  rect: RectJson,
): void {
  title.addEventListener("mousedown", (down) => {
    const startX = down.clientX;
    const startY = down.clientY;
    const onUp = (up: MouseEvent) => {
      document.removeEventListener("mouseup", onUp);
      const dx = Math.round((up.clientX - startX) / GRID_UNIT_PX);
      const dy = Math.round((up.clientY - startY) / GRID_UNIT_PX);
      if (dx !== 0 || dy !== 0) {
        void c.moveView(viewId, {
          x: Math.max(0, rect.x + dx),
          y: Math.max(0, rect.y + dy),
          w: rect.w,
          h: rect.h,
        });
      }
    };
    document.addEventListener("mouseup", onUp);
  });
}

function sliderRow(c: Controller, slider: SliderJson): HTMLElement {
  const row = document.createElement("div");
  row.className = "slider";
  row.dataset.dim = slider.dimension;

  const label = document.createElement("label");
  label.textContent = slider.dimension;
  if (slider.field) {
    label.textContent += ` (${slider.field})`;
  }
  row.appendChild(label);

  const [extentLo, extentHi] = slider.extent;
  const step = (extentHi - extentLo) / 200 || 0.01;
  const mk = (cls: string, value: number) => {
    const input = document.createElement("input");
    input.type = "range";
    input.className = cls;
    input.min = String(extentLo);
    input.max = String(extentHi);
    input.step = String(step);
    input.value = String(value);
    return input;
  };
  const lo = mk("slider-lo", slider.current[0]);
  const hi = mk("slider-hi", slider.current[1]);

  const readout = document.createElement("span");
  readout.className = "slider-readout";
  const show = () =>
    (readout.textContent = `[${Number(lo.value).toFixed(3)}, ${Number(hi.value).toFixed(3)}]`);
  show();

  const commit = () => {
    const a = Number(lo.value);
    const b = Number(hi.value);
    void c.dragSlider(slider.dimension, Math.min(a, b), Math.max(a, b));
  };
  for (const input of [lo, hi]) {
    input.addEventListener("input", show);
    input.addEventListener("change", commit);
  }
  row.appendChild(lo);
  row.appendChild(hi);
  row.appendChild(readout);
  return row;
}

export function renderDashboard(c: Controller): void {
  const root = c.els.dashboard;
  root.textContent = "";
  const doc = c.state.doc;

  const toolbar = document.createElement("div");
  toolbar.className = "dash-toolbar";

  const mode = doc?.mode ?? "edit";
  const modeButton = document.createElement("button");
  modeButton.id = "mode-toggle";
  modeButton.textContent = `mode: ${mode}`;
  modeButton.addEventListener("click", () => {
    void c.setMode(mode === "edit" ? "analyze" : "edit");
  });
  toolbar.appendChild(modeButton);

  const passInfo = document.createElement("span");
  passInfo.className = "pass-info";
  passInfo.textContent =
    c.state.passCount === null ? "" : `${c.state.passCount} runs pass`;
  toolbar.appendChild(passInfo);
  root.appendChild(toolbar);

  if (!doc || doc.views.length === 0) {
    const prompt = document.createElement("p");
    prompt.className = "placeholder";
    prompt.textContent = "Copy charts here from the overview.";
    root.appendChild(prompt);
    return;
  }

  const sliders = document.createElement("div");
  sliders.className = "sliders";
  for (const slider of doc.sliders) sliders.appendChild(sliderRow(c, slider));
  root.appendChild(sliders);

  const canvas = document.createElement("div");
  canvas.className = `dash-canvas mode-${mode}`;
  for (const view of doc.views) {
    const entry = c.state.viewPayloads.get(view.view_id);
    const holder = document.createElement("div");
    holder.className = "dash-view";
    holder.dataset.viewId = String(view.view_id);
    holder.style.left = `${view.rect.x * GRID_UNIT_PX}px`;
    holder.style.top = `${view.rect.y * GRID_UNIT_PX}px`;
    holder.style.width = `${view.rect.w * GRID_UNIT_PX}px`;
    holder.style.height = `${view.rect.h * GRID_UNIT_PX}px`;

    const title = document.createElement("div");
    title.className = "view-title";
    const optionId = view.cell?.option ?? "external";
    title.textContent = `#${view.view_id} ${OPTION_LABELS[optionId] ?? optionId}`;
    holder.appendChild(title);

    if (mode === "edit") {
      holder.appendChild(viewMenu(c, view.view_id, view.rect));
      attachTitleDrag(c, title, view.view_id, view.rect);
    }

    if (entry) {
      const pass = passCountOf(entry);
      if (pass !== null) holder.dataset.passCount = String(pass);
      const body = document.createElement("div");
      body.className = "view-body";
      body.appendChild(viewBody(entry));
      body.addEventListener("click", (event) => {
        const target = (event.target as Element).closest("[data-run]");
        if (target) void c.selectRun(Number(target.getAttribute("data-run")));
      });
      holder.appendChild(body);
    }

    if (c.state.styleEditorView === view.view_id && mode === "edit") {
      holder.appendChild(styleEditor(c, view.view_id));
    }
    canvas.appendChild(holder);
  }
  root.appendChild(canvas);
}
