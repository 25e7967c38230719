/** Small SVG renderers, one per payload kind.

Marks carry a data-run attribute so selection can highlight the same run
in every chart. Scales come from the raw values in the payload; counts,
quartiles, contours, and curves are always server numbers.
*/

const SVG_NS = "http://www.w3.org/2000/svg";

export interface ChartSize {
  width: number;
  height: number;
}

export const CELL_SIZE: ChartSize = { width: 150, height: 110 };
export const VIEW_SIZE: ChartSize = { width: 300, height: 220 };

const PAD = 12;

function svgRoot(size: ChartSize, kind: string): SVGSVGElement {
  const svg = document.createElementNS(SVG_NS, "svg") as SVGSVGElement;
  svg.setAttribute("viewBox", `0 0 ${size.width} ${size.height}`);
  svg.setAttribute("class", `chart chart-${kind}`);
  svg.dataset.kind = kind;
  return svg;
}

function extent(values: number[]): [number, number] {
  let lo = Infinity;
  let hi = -Infinity;
  for (const v of values) {
    if (v < lo) lo = v;
    if (v > hi) hi = v;
  }
  if (!isFinite(lo)) return [0, 1];
  if (lo === hi) return [lo - 0.5, hi + 0.5];
  return [lo, hi];
}

function scale(domain: [number, number], range: [number, number]): (v: number) => number {
  const span = domain[1] - domain[0];
  return (v) => range[0] + ((v - domain[0]) / span) * (range[1] - range[0]);
}

function mark(
  tag: string,
  attrs: Record<string, string | number>,
  run?: number,
): SVGElement {
  const el = document.createElementNS(SVG_NS, tag);
  for (const [key, value] of Object.entries(attrs)) el.setAttribute(key, String(value));
  if (run !== undefined) el.setAttribute("data-run", String(run));
  return el;
}

export interface RunMarkOptions {
  pass?: Set<number>;
  selected?: number | null;
  preselected?: number[];
  pixel?: boolean;
}

/** Scatter of one run per mark; pixel mode draws small squares instead. */
export function scatterChart(
  xs: number[],
  ys: number[],
  size: ChartSize,
  opts: RunMarkOptions = {},
): SVGSVGElement {
  const svg = svgRoot(size, opts.pixel ? "pixels" : "scatter");
  const sx = scale(extent(xs), [PAD, size.width - PAD]);
  const sy = scale(extent(ys), [size.height - PAD, PAD]);
  const pre = new Set(opts.preselected ?? []);
  for (let run = 0; run < xs.length; run++) {
    const passing = opts.pass ? opts.pass.has(run) : true;
    const classes = ["mark"];
    if (!passing) classes.push("filtered-out");
    if (pre.has(run)) classes.push("preselected");
    if (opts.selected === run) classes.push("selected");
    const x = sx(xs[run]);
    const y = sy(ys[run]);
    const el = opts.pixel
      ? mark("rect", { x: x - 2, y: y - 2, width: 4, height: 4, class: classes.join(" ") }, run)
      : mark("circle", { cx: x, cy: y, r: 3, class: classes.join(" ") }, run);
    svg.appendChild(el);
  }
  return svg;
}

/** Pairwise mini-matrix for up to three dimensions. */
export function matrixChart(
  columns: { name: string; values: number[] }[],
  size: ChartSize,
  opts: RunMarkOptions = {},
): SVGSVGElement {
  const dims = columns.slice(0, 3);
  const svg = svgRoot(size, "matrix");
  const n = dims.length;
  const cw = size.width / n;
  const ch = size.height / n;
  for (let row = 0; row < n; row++) {
    for (let col = 0; col < n; col++) {
      if (row === col) continue;
      const sx = scale(extent(dims[col].values), [col * cw + 3, (col + 1) * cw - 3]);
      const sy = scale(extent(dims[row].values), [(row + 1) * ch - 3, row * ch + 3]);
      for (let run = 0; run < dims[col].values.length; run++) {
        const passing = opts.pass ? opts.pass.has(run) : true;
        const classes = passing ? "mark" : "mark filtered-out";
        svg.appendChild(
          mark(
            "circle",
            { cx: sx(dims[col].values[run]), cy: sy(dims[row].values[run]), r: 1.5, class: classes },
            run,
          ),
        );
      }
    }
  }
  return svg;
}

/** Raw value rug: the overview stand-in for a histogram (bins are server
work and arrive with the dashboard payload). */
export function rugChart(values: number[], size: ChartSize): SVGSVGElement {
  const svg = svgRoot(size, "rug");
  const sx = scale(extent(values), [PAD, size.width - PAD]);
  const y0 = size.height * 0.35;
  const y1 = size.height * 0.65;
  values.forEach((v, run) => {
    svg.appendChild(
      mark("line", { x1: sx(v), x2: sx(v), y1: y0, y2: y1, class: "mark rug-tick" }, run),
    );
  });
  return svg;
}

export interface BinJson {
  lo: number;
  hi: number;
  pass: number;
  all: number;
}

/** Paired bars: total count behind, passing count in front. */
export function histogramChart(bins: BinJson[], size: ChartSize): SVGSVGElement {
  const svg = svgRoot(size, "histogram");
  if (bins.length === 0) return svg;
  const maxCount = Math.max(1, ...bins.map((b) => b.all));
  const sx = scale([bins[0].lo, bins[bins.length - 1].hi], [PAD, size.width - PAD]);
  const sy = scale([0, maxCount], [size.height - PAD, PAD]);
  bins.forEach((bin, i) => {
    const x = sx(bin.lo);
    const w = Math.max(1, sx(bin.hi) - x - 1);
    svg.appendChild(
      mark("rect", {
        x, y: sy(bin.all), width: w, height: size.height - PAD - sy(bin.all),
        class: "bar bar-all", "data-bin": i, "data-all": bin.all,
      }),
    );
    svg.appendChild(
      mark("rect", {
        x, y: sy(bin.pass), width: w, height: size.height - PAD - sy(bin.pass),
        class: "bar bar-pass", "data-bin": i, "data-pass": bin.pass,
      }),
    );
  });
  return svg;
}

/** Parallel coordinates: one polyline per run across the named axes. */
export function pcChart(
  axes: { name: string; values: number[] }[],
  size: ChartSize,
  opts: RunMarkOptions = {},
): SVGSVGElement {
  const svg = svgRoot(size, "pc");
  if (axes.length === 0) return svg;
  const runCount = axes[0].values.length;
  const xs = axes.map((_, i) =>
    PAD + (i * (size.width - 2 * PAD)) / Math.max(1, axes.length - 1),
  );
  const scales = axes.map((a) => scale(extent(a.values), [size.height - PAD, PAD]));
  for (const x of xs) {
    svg.appendChild(mark("line", { x1: x, x2: x, y1: PAD, y2: size.height - PAD, class: "axis" }));
  }
  for (let run = 0; run < runCount; run++) {
    const points = axes
      .map((a, i) => `${xs[i]},${scales[i](a.values[run])}`)
      .join(" ");
    const passing = opts.pass ? opts.pass.has(run) : true;
    const classes = ["mark", "pc-line"];
    if (!passing) classes.push("filtered-out");
    if (opts.selected === run) classes.push("selected");
    svg.appendChild(mark("polyline", { points, fill: "none", class: classes.join(" ") }, run));
  }
  return svg;
}

/** One line per run of a 1D series object. */
export function seriesChart(
  series: Record<string, number[]>,
  size: ChartSize,
  selected: number | null = null,
): SVGSVGElement {
  const svg = svgRoot(size, "series");
  const rows = Object.entries(series);
  if (rows.length === 0) return svg;
  const all = rows.flatMap(([, vs]) => vs);
  const sy = scale(extent(all), [size.height - PAD, PAD]);
  const length = rows[0][1].length;
  const sx = scale([0, Math.max(1, length - 1)], [PAD, size.width - PAD]);
  for (const [runText, values] of rows) {
    const run = Number(runText);
    const points = values.map((v, i) => `${sx(i)},${sy(v)}`).join(" ");
    const classes = run === selected ? "mark series-line selected" : "mark series-line";
    svg.appendChild(mark("polyline", { points, fill: "none", class: classes }, run));
  }
  return svg;
}

export interface BoxJson {
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
  whisker_lo: number;
  whisker_hi: number;
  outliers: number[];
}

/** Per-position box glyphs over a series axis, subsampled to fit. */
export function boxSeriesChart(positions: BoxJson[], size: ChartSize): SVGSVGElement {
  const svg = svgRoot(size, "box-series");
  if (positions.length === 0) {
    svg.appendChild(mark("text", { x: PAD, y: size.height / 2, class: "placeholder-text" }));
    return svg;
  }
  const lo = Math.min(...positions.map((p) => p.whisker_lo));
  const hi = Math.max(...positions.map((p) => p.whisker_hi));
  const sy = scale([lo, hi], [size.height - PAD, PAD]);
  const maxGlyphs = Math.floor((size.width - 2 * PAD) / 4);
  const step = Math.max(1, Math.ceil(positions.length / maxGlyphs));
  const sx = scale([0, positions.length - 1], [PAD, size.width - PAD]);
  for (let i = 0; i < positions.length; i += step) {
    const p = positions[i];
    const x = sx(i);
    svg.appendChild(
      mark("line", { x1: x, x2: x, y1: sy(p.whisker_lo), y2: sy(p.whisker_hi), class: "whisker" }),
    );
    svg.appendChild(
      mark("rect", {
        x: x - 1.5, y: sy(p.q3), width: 3, height: Math.max(0.5, sy(p.q1) - sy(p.q3)),
        class: "box", "data-position": i,
      }),
    );
  }
  return svg;
}

/** Normalized cumulative curves, one per run, from 0 to 1. */
export function cumulativeChart(
  curves: Record<string, number[]>,
  size: ChartSize,
  selected: number | null = null,
): SVGSVGElement {
  const svg = svgRoot(size, "cumulative");
  const rows = Object.entries(curves);
  if (rows.length === 0) return svg;
  const length = rows[0][1].length;
  const sx = scale([0, Math.max(1, length - 1)], [PAD, size.width - PAD]);
  const sy = scale([0, 1], [size.height - PAD, PAD]);
  for (const [runText, values] of rows) {
    const run = Number(runText);
    const points = values.map((v, i) => `${sx(i)},${sy(v)}`).join(" ");
    const classes = run === selected ? "mark cum-line selected" : "mark cum-line";
    svg.appendChild(mark("polyline", { points, fill: "none", class: classes }, run));
  }
  return svg;
}

export interface ContourJson {
  level: number;
  percentile: number;
  points: [number, number][];
  closed: boolean;
}

/** Density iso-lines plus the underlying runs as faint pixels. */
export function contourChart(
  contours: ContourJson[],
  xs: number[],
  ys: number[],
  size: ChartSize,
  opts: RunMarkOptions = {},
): SVGSVGElement {
  const svg = scatterChart(xs, ys, size, { ...opts, pixel: true });
  svg.dataset.kind = "contours";
  svg.setAttribute("class", "chart chart-contours");
  const sx = scale(extent(xs), [PAD, size.width - PAD]);
  const sy = scale(extent(ys), [size.height - PAD, PAD]);
  for (const contour of contours) {
    const points = contour.points.map(([x, y]) => `${sx(x)},${sy(y)}`).join(" ");
    const tag = contour.closed ? "polygon" : "polyline";
    svg.appendChild(
      mark(tag, {
        points, fill: "none",
        class: `contour contour-p${contour.percentile}`,
        "data-percentile": contour.percentile,
      }),
    );
  }
  return svg;
}

export interface ImageItem {
  run: number;
  ref: string;
  pass?: boolean;
}

/**
 * Image tiles; refs render as labeled placeholders since fixtures name
 * files that are not served. mode "sup" stacks them with CSS blending.
 */
export function imageTiles(
  items: ImageItem[],
  mode: "grid" | "jux" | "sup",
  selected: number | null = null,
): HTMLElement {
  const wrap = document.createElement("div");
  wrap.className = `image-tiles image-${mode}`;
  wrap.dataset.kind = `images_${mode}`;
  for (const item of items) {
    const tile = document.createElement("div");
    tile.className = "image-tile";
    if (item.pass === false) tile.classList.add("filtered-out");
    if (item.run === selected) tile.classList.add("selected");
    tile.dataset.run = String(item.run);
    tile.title = item.ref;
    tile.textContent = item.ref;
    wrap.appendChild(tile);
  }
  return wrap;
}
