/** Data-selection panel: draggable dimension markers and channel fields.

A marker dropped on a field issues one encoding update; a marker dropped
back on the tray removes the dimension everywhere. Incompatible drops
never reach the API: the field shakes and explains itself in a tooltip.
*/

import type { Controller } from "./controller.js";
import {
  FIELD_COLORS,
  type DimensionJson,
  type FieldName,
  fieldOf,
} from "./state.js";

const FIELD_TITLES: Record<FieldName, string> = {
  s1: "Spatial 1",
  s2: "Spatial 2",
  color: "Color",
  opacity: "Opacity",
  object: "Object",
};

const DTYPE_GLYPHS: Record<DimensionJson["dtype"], string> = {
  quantitative: "#",
  series_1d: "~",
  image_ref_2d: "::",
};

export function shakeField(panel: HTMLElement, field: FieldName, message: string): void {
  const box = panel.querySelector<HTMLElement>(`[data-field="${field}"]`);
  if (!box) return;
  box.classList.add("shake");
  box.title = message;
  setTimeout(() => box.classList.remove("shake"), 400);
}

function marker(c: Controller, dim: DimensionJson): HTMLElement {
  const el = document.createElement("span");
  el.className = "marker";
  el.draggable = true;
  el.dataset.dim = dim.name;
  el.textContent = `${dim.name} ${DTYPE_GLYPHS[dim.dtype]}`;
  el.title = `${dim.dtype}, ${dim.role}, ${dim.sampling} sampling`;
  const field = fieldOf(c.state.encoding, dim.name);
  if (field) {
    el.style.background = FIELD_COLORS[field];
    el.classList.add("encoded");
  }
  el.addEventListener("dragstart", (event) => {
    c.state.dragging = dim.name;
    event.dataTransfer?.setData("text/plain", dim.name);
  });
  el.addEventListener("dragend", () => {
    c.state.dragging = null;
  });
  return el;
}

function fieldBox(c: Controller, field: FieldName): HTMLElement {
  const box = document.createElement("div");
  box.className = "field-box";
  box.dataset.field = field;
  box.style.borderColor = FIELD_COLORS[field];

  const head = document.createElement("header");
  head.textContent = FIELD_TITLES[field];
  box.appendChild(head);

  const body = document.createElement("div");
  body.className = "field-chips";
  for (const name of c.state.encoding[field]) {
    const chip = document.createElement("span");
    chip.className = "chip";
    chip.draggable = true;
    chip.dataset.dim = name;
    chip.style.background = FIELD_COLORS[field];
    chip.textContent = name;
    chip.addEventListener("dragstart", (event) => {
      c.state.dragging = name;
      event.dataTransfer?.setData("text/plain", name);
    });
    body.appendChild(chip);
  }
  box.appendChild(body);

  box.addEventListener("dragover", (event) => event.preventDefault());
  box.addEventListener("drop", (event) => {
    event.preventDefault();
    const dim = event.dataTransfer?.getData("text/plain") || c.state.dragging;
    if (dim) void c.dropDimension(dim, field);
  });

  const framing = c.state.recommendation?.frames.find(
    (f) => f.target_kind === "channel_field" && f.target === field,
  );
  if (framing) {
    box.classList.add("framed");
    if (framing.marginal) box.classList.add("frame-marginal");
    box.style.outlineColor = c.state.frameColors[framing.task] ?? "";
    box.dataset.framedTask = framing.task;
  }
  return box;
}

export function renderPanel(c: Controller): void {
  const root = c.els.panel;
  root.textContent = "";

  const tray = document.createElement("div");
  tray.className = "marker-tray";
  tray.addEventListener("dragover", (event) => event.preventDefault());
  tray.addEventListener("drop", (event) => {
    event.preventDefault();
    const dim = event.dataTransfer?.getData("text/plain") || c.state.dragging;
    if (dim) void c.dropDimension(dim, null);
  });
  for (const dim of c.state.dimensions) tray.appendChild(marker(c, dim));
  root.appendChild(tray);

  const fields = document.createElement("div");
  fields.className = "fields";
  for (const field of ["s1", "s2", "color", "opacity", "object"] as FieldName[]) {
    fields.appendChild(fieldBox(c, field));
  }
  root.appendChild(fields);
}
