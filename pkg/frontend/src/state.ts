/** Shared UI state, payload types, and the color system. */

export type FieldName = "s1" | "s2" | "color" | "opacity" | "object";

export type TaskId =
  | "optimization"
  | "fitting"
  | "uncertainty"
  | "outliers"
  | "sensitivity"
  | "partitioning";

export const TASK_ORDER: TaskId[] = [
  "optimization",
  "fitting",
  "uncertainty",
  "outliers",
  "sensitivity",
  "partitioning",
];

/** Tooltip copy, one line per task button. */
export const TASK_DESCRIPTIONS: Record<TaskId, string> = {
  optimization: "Find the best parameter setting",
  fitting: "Find where actual model data occurs",
  uncertainty: "Determine the reliability of the output",
  outliers: "Find odd or special outputs",
  sensitivity: "Identify input regions with high or low impact on the output",
  partitioning: "Identify different types of model behavior",
};

/**
 * Four categorical frame colors, assigned to active tasks in server order.
 * The field colors live in a separate, darker hue family so a frame around
 * a channel field never blends into the field's own tint.
 */
export const TASK_PALETTE = ["#e15759", "#f28e2b", "#59a14f", "#b07aa1"] as const;

export const FIELD_COLORS: Record<FieldName, string> = {
  s1: "#2f5b8f",
  s2: "#3d7a96",
  color: "#7b4f9e",
  opacity: "#5c6f91",
  object: "#4d4d66",
};

export interface DimensionJson {
  name: string;
  dtype: "quantitative" | "series_1d" | "image_ref_2d";
  role: string;
  sampling: string;
  series_length?: number | null;
}

export interface EncodingJson {
  s1: string[];
  s2: string[];
  color: string[];
  opacity: string[];
  object: string[];
}

export function emptyEncoding(): EncodingJson {
  return { s1: [], s2: [], color: [], opacity: [], object: [] };
}

export interface SwitchJson {
  channel: string;
  candidates: string[];
  active: string;
  column: number | null;
  row: number | null;
}

export interface CellJson {
  option: string;
  source: string | null;
  dims: string[];
  spatial_fields: string[];
  x: string | null;
  y: string | null;
  axes: string[] | null;
  color: string | null;
  opacity: string | null;
  object_dim: string | null;
  switches: SwitchJson[];
}

export interface LayoutJson {
  option: string;
  shape: [number, number];
  selected_cell: [number, number];
  columns: { source: string; dims: string[] }[];
  rows: { kind: string; dim: string | null }[];
  cells: (CellJson & { spec: VisSpec })[][];
}

export interface VisSpec {
  vis_type: string;
  data_ref: string;
  encodings: Record<string, unknown>;
  style: Record<string, unknown>;
  interaction: Record<string, unknown>;
  switches?: SwitchJson[];
}

export interface OverviewPayload {
  encoding: EncodingJson;
  options: string[];
  layouts: Record<string, LayoutJson>;
  singles: Record<string, CellJson & { spec: VisSpec }>;
  data: {
    columns: Record<string, number[]>;
    objects: Record<string, number[][] | string[]>;
    run_count: number;
  };
  highlights: { selected: number | null; preselected: number[] };
}

export interface FrameJson {
  task: TaskId;
  target_kind: "vis_option" | "channel_field";
  target: string;
  marginal: boolean;
  variant?: string;
}

export interface GuidanceJson {
  task: TaskId;
  description: string;
  strategy: string;
  group: string;
  mdmv: string;
  complex: string;
  options: string[];
  explanation: string;
  hints: string[];
}

export interface RecommendationJson {
  tasks: TaskId[];
  frames: FrameJson[];
  guidance: GuidanceJson[];
}

export interface SliderJson {
  dimension: string;
  extent: [number, number];
  current: [number, number];
  field: string | null;
}

export interface DocJson {
  views: {
    view_id: number;
    rect: RectJson;
    cell?: CellJson | null;
    external?: Record<string, unknown> | null;
    style?: Record<string, unknown>;
  }[];
  sliders: SliderJson[];
  mode: "edit" | "analyze";
  filter_state: { ranges: Record<string, [number, number]>; selected_run: number | null };
  next_view_id: number;
}

export interface RectJson {
  x: number;
  y: number;
  w: number;
  h: number;
}

export interface ViewPayloadJson {
  view_id: number;
  rect: RectJson;
  spec: VisSpec | Record<string, unknown>;
  payload: Record<string, unknown> & { kind: string };
}

export interface FiltersResponse {
  pass_count: number;
  pass: number[];
  views: ViewPayloadJson[];
}

export interface SessionSummary {
  id: string;
  table_id: string;
  run_count: number;
  dimensions: DimensionJson[];
}

export interface DetailSelection {
  option: string;
  row: number;
  col: number;
  overrides: Record<string, string>;
}

export interface UiState {
  sessionId: string | null;
  dimensions: DimensionJson[];
  encoding: EncodingJson;
  dragging: string | null;
  hoveredTask: TaskId | null;
  activeTasks: TaskId[];
  frameColors: Partial<Record<TaskId, string>>;
  overview: OverviewPayload | null;
  recommendation: RecommendationJson | null;
  detail: DetailSelection | null;
  doc: DocJson | null;
  viewPayloads: Map<number, ViewPayloadJson>;
  selectedRun: number | null;
  passCount: number | null;
  styleEditorView: number | null;
}

export function initialState(): UiState {
  return {
    sessionId: null,
    dimensions: [],
    encoding: emptyEncoding(),
    dragging: null,
    hoveredTask: null,
    activeTasks: ["optimization"],
    frameColors: {},
    overview: null,
    recommendation: null,
    detail: null,
    doc: null,
    viewPayloads: new Map(),
    selectedRun: null,
    passCount: null,
    styleEditorView: null,
  };
}

/** One frame color per active task, in the order the server reports them. */
export function assignFrameColors(tasks: TaskId[]): Partial<Record<TaskId, string>> {
  const colors: Partial<Record<TaskId, string>> = {};
  tasks.forEach((task, i) => {
    colors[task] = TASK_PALETTE[i % TASK_PALETTE.length];
  });
  return colors;
}

/** Client-side mirror of the engine's dtype rules, for instant drop feedback. */
export function dropAllowed(dim: DimensionJson, field: FieldName): boolean {
  if (field === "object") {
    return dim.dtype === "series_1d" || dim.dtype === "image_ref_2d";
  }
  return dim.dtype === "quantitative";
}

/** The field a dimension is currently tinted by, spatial fields first. */
export function fieldOf(enc: EncodingJson, dim: string): FieldName | null {
  const order: FieldName[] = ["s1", "s2", "color", "opacity", "object"];
  for (const field of order) {
    if (enc[field].includes(dim)) return field;
  }
  return null;
}
