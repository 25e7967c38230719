/** The surface renderer modules call back into. main.ts implements it. */

import type { ApiClient } from "./api.js";
import type { CellJson, FieldName, RectJson, TaskId, UiState } from "./state.js";

export interface UiElements {
  status: HTMLElement;
  panel: HTMLElement;
  taskbar: HTMLElement;
  overview: HTMLElement;
  detail: HTMLElement;
  guidance: HTMLElement;
  dashboard: HTMLElement;
}

export interface Controller {
  readonly state: UiState;
  readonly api: ApiClient;
  readonly els: UiElements;

  dropDimension(dim: string, field: FieldName | null): Promise<void>;
  toggleTask(task: TaskId): Promise<void>;
  openDetail(option: string, row: number, col: number): void;
  switchDetail(channel: string, dim: string): void;
  copyCellToDashboard(cell: CellJson): Promise<void>;
  copyExternalToDashboard(blob: Record<string, unknown>): Promise<void>;
  dragSlider(dim: string, lo: number, hi: number): Promise<void>;
  selectRun(run: number | null): Promise<void>;
  setMode(mode: "edit" | "analyze"): Promise<void>;
  moveView(viewId: number, rect: RectJson): Promise<void>;
  patchViewStyle(viewId: number, patch: Record<string, unknown>): Promise<void>;
  removeView(viewId: number): Promise<void>;
  showError(message: string): void;
}

/** Labels for the thirteen chart options, keyed by their wire ids. */
export const OPTION_LABELS: Record<string, string> = {
  SP: "Scatterplot",
  wDCP: "Dense-pixel display",
  SPLOM: "Scatterplot matrix",
  rSPLOM: "Reduced scatterplot matrix",
  PSc: "Pixel scatter",
  PC: "Parallel coordinates",
  Hist: "Histogram",
  Line1D: "1D line graph",
  Box1D: "1D box plots",
  CHist1D: "1D cumulative histogram",
  Grid2D: "2D grid",
  Jux2D: "2D juxtaposition",
  Sup2D: "2D superimposition",
};

export const MDMV_OPTIONS = ["SP", "wDCP", "SPLOM", "rSPLOM", "PSc", "PC", "Hist"];
