"""Crossfilter and the chart-feeding statistics.

All queries share one FilterState: a conjunction of closed value intervals
over quantitative dimensions plus an optional selected run. Histograms and
density grids keep their frame of reference stable while filtering: bin edges
and grid extents always come from the unfiltered column so bars shrink in
place instead of rescaling.

Everything here is deterministic; the only randomness in the system lives in
seeded fixtures.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

import numpy as np
from skimage import measure

from .data_model import Dtype, RunTable, UnknownDimension, UnknownRun
from .errors import EngineError

HISTOGRAM_BINS_DEFAULT = 10
DENSITY_GRID = 64
DENSITY_PERCENTILES = (25, 50, 75, 90)
WHISKER_REACH = 1.5


class NonQuantitativeFilter(EngineError):
    def __init__(self, name: str):
        super().__init__(f"dimension {name!r} is not quantitative, cannot range-filter it")


class InvalidRange(EngineError):
    pass


class EmptySelection(EngineError):
    pass


class DegenerateExtent(EngineError):
    def __init__(self, name: str):
        super().__init__(f"dimension {name!r} has zero extent")


def _check_range(name: str, lo, hi) -> tuple[float, float]:
    lo, hi = float(lo), float(hi)
    if math.isnan(lo) or math.isnan(hi) or lo > hi:
        raise InvalidRange(f"range for {name!r} must satisfy lo <= hi, got ({lo}, {hi})")
    return lo, hi


@dataclass(frozen=True, eq=True)
class FilterState:
    """Immutable filter value: closed intervals per dimension + selected run.

    Use with_range/without_range/with_selected_run to derive new states;
    callers always own their copy.
    """

    ranges: Mapping[str, tuple[float, float]] = field(default_factory=dict)
    selected_run: int | None = None

    def __post_init__(self):
        checked = {
            str(k): _check_range(k, v[0], v[1]) for k, v in dict(self.ranges).items()
        }
        object.__setattr__(self, "ranges", MappingProxyType(checked))

    def __eq__(self, other):
        if not isinstance(other, FilterState):
            return NotImplemented
        return dict(self.ranges) == dict(other.ranges) and self.selected_run == other.selected_run

    def with_range(self, name: str, lo: float, hi: float) -> "FilterState":
        ranges = dict(self.ranges)
        ranges[name] = _check_range(name, lo, hi)
        return FilterState(ranges, self.selected_run)

    def without_range(self, name: str) -> "FilterState":
        ranges = dict(self.ranges)
        ranges.pop(name, None)
        return FilterState(ranges, self.selected_run)

    def with_selected_run(self, run_id: int | None) -> "FilterState":
        return FilterState(dict(self.ranges), run_id)

    def to_json_dict(self) -> dict:
        return {
            "ranges": {k: [v[0], v[1]] for k, v in self.ranges.items()},
            "selected_run": self.selected_run,
        }

    @classmethod
    def from_json_dict(cls, data) -> "FilterState":
        if not isinstance(data, dict):
            raise InvalidRange("filter state must be a JSON object")
        ranges = data.get("ranges", {})
        if not isinstance(ranges, dict):
            raise InvalidRange('"ranges" must be an object')
        parsed = {}
        for name, pair in ranges.items():
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise InvalidRange(f"range for {name!r} must be a [lo, hi] pair")
            parsed[name] = (pair[0], pair[1])
        return cls(parsed, data.get("selected_run"))


@dataclass(frozen=True)
class FilterResult:
    """Pass mask over run ids (index == run id) plus its popcount."""

    pass_mask: np.ndarray
    pass_count: int

    def pass_ids(self) -> list[int]:
        return [int(i) for i in np.flatnonzero(self.pass_mask)]


def _quant_column(table: RunTable, name: str) -> np.ndarray:
    dim = table.dimension(name)
    if dim.dtype is not Dtype.QUANTITATIVE:
        raise NonQuantitativeFilter(name)
    return table.values(name)


def apply_filters(table: RunTable, f: FilterState) -> FilterResult:
    """Conjunctive closed-interval filter; runs pass when inside every range."""
    mask = np.ones(table.run_count, dtype=bool)
    for name, (lo, hi) in f.ranges.items():
        col = _quant_column(table, name)
        mask &= (col >= lo) & (col <= hi)
    return FilterResult(pass_mask=mask, pass_count=int(mask.sum()))


def select_run(table: RunTable, f: FilterState, run_id: int | None) -> FilterState:
    if run_id is not None and not (0 <= int(run_id) < table.run_count):
        raise UnknownRun(run_id)
    return f.with_selected_run(None if run_id is None else int(run_id))


@dataclass(frozen=True)
class HistogramBin:
    lo: float
    hi: float
    count_pass: int
    count_all: int

    def to_json_dict(self) -> dict:
        return {"lo": self.lo, "hi": self.hi, "pass": self.count_pass, "all": self.count_all}


def _bin_extent(col: np.ndarray, name: str) -> tuple[float, float]:
    lo = float(col.min())
    hi = float(col.max())
    if lo == hi:
        # Constant column: widen to a unit window so equal-width bins exist;
        # all mass lands in the middle bin.
        return lo - 0.5, hi + 0.5
    return lo, hi


def histogram(
    table: RunTable,
    dim: str,
    f: FilterState | None = None,
    bins: int = HISTOGRAM_BINS_DEFAULT,
) -> list[HistogramBin]:
    """Equal-width bins over the unfiltered extent, right-open except the last
    bin, counting both passing and all runs so filtered bars shrink in place."""
    if bins < 1:
        raise InvalidRange("bins must be >= 1")
    col = _quant_column(table, dim)
    if col.size == 0:
        raise EmptySelection("table has no runs")
    lo, hi = _bin_extent(col, dim)
    width = (hi - lo) / bins
    # Bin i covers [lo + i*width, lo + (i+1)*width), with the last bin closed
    # at hi. Assigning through the explicit interior edges keeps boundary
    # values on the same side as any edge-comparison reading of that rule.
    edges = lo + np.arange(1, bins) * width
    idx = np.searchsorted(edges, col, side="right")
    all_counts = np.bincount(idx, minlength=bins)
    if f is not None and len(f.ranges):
        mask = apply_filters(table, f).pass_mask
        pass_counts = np.bincount(idx[mask], minlength=bins)
    else:
        pass_counts = all_counts
    return [
        HistogramBin(
            lo=float(lo + i * width),
            hi=float(lo + (i + 1) * width) if i < bins - 1 else float(hi),
            count_pass=int(pass_counts[i]),
            count_all=int(all_counts[i]),
        )
        for i in range(bins)
    ]


@dataclass(frozen=True)
class ContourPolyline:
    level: float
    percentile: int
    points: tuple[tuple[float, float], ...]
    closed: bool

    def to_json_dict(self) -> dict:
        return {
            "level": self.level,
            "percentile": self.percentile,
            "points": [[x, y] for x, y in self.points],
            "closed": self.closed,
        }


def _scott_bandwidth(values: np.ndarray, extent: tuple[float, float]) -> float:
    # Scott's rule for 2D data; a degenerate axis (stdev 0, e.g. a single
    # passing run) falls back to a fixed fraction of the unfiltered extent.
    n = values.size
    sigma = float(values.std())
    if sigma > 0:
        return sigma * n ** (-1.0 / 6.0)
    return (extent[1] - extent[0]) / 16.0


def _density_core(
    table: RunTable,
    xdim: str,
    ydim: str,
    weight: str | None,
    f: FilterState | None,
):
    """Shared KDE evaluation. Returns (grid, extents, cell sizes) or None
    when no run passes the filter."""
    xs = _quant_column(table, xdim)
    ys = _quant_column(table, ydim)
    if xs.size == 0:
        return None
    x_extent = (float(xs.min()), float(xs.max()))
    y_extent = (float(ys.min()), float(ys.max()))
    if x_extent[0] == x_extent[1]:
        raise DegenerateExtent(xdim)
    if y_extent[0] == y_extent[1]:
        raise DegenerateExtent(ydim)

    if f is not None:
        mask = apply_filters(table, f).pass_mask
    else:
        mask = np.ones(table.run_count, dtype=bool)
    if not mask.any():
        return None
    sx = xs[mask]
    sy = ys[mask]

    if weight is not None:
        raw = _quant_column(table, weight)[mask].astype(np.float64)
        shifted = raw - raw.min()
        mean = shifted.mean()
        weights = shifted / mean if mean > 0 else np.ones_like(shifted)
    else:
        weights = np.ones(sx.size, dtype=np.float64)

    hx = _scott_bandwidth(sx, x_extent)
    hy = _scott_bandwidth(sy, y_extent)

    n = DENSITY_GRID
    dx = (x_extent[1] - x_extent[0]) / n
    dy = (y_extent[1] - y_extent[0]) / n
    cx = x_extent[0] + (np.arange(n) + 0.5) * dx
    cy = y_extent[0] + (np.arange(n) + 0.5) * dy

    # grid[iy, ix]; separable Gaussian kernels.
    gx = np.exp(-0.5 * ((cx[None, :] - sx[:, None]) / hx) ** 2)
    gy = np.exp(-0.5 * ((cy[None, :] - sy[:, None]) / hy) ** 2)
    grid = np.einsum("si,sj->ij", gy * weights[:, None], gx)

    total = grid.sum() * dx * dy
    if total <= 0:
        return None
    return grid / total, x_extent, y_extent, dx, dy


def density_contours(
    table: RunTable,
    xdim: str,
    ydim: str,
    weight: str | None = None,
    f: FilterState | None = None,
) -> list[ContourPolyline]:
    """Weighted Gaussian kernel density over the filtered-in runs.

    The density is evaluated on a DENSITY_GRID^2 grid of cell centers spanning
    the unfiltered extents and normalized so its Riemann sum is 1. Iso-lines
    are extracted at the 25/50/75/90th percentile of the evaluated grid
    values. Weights are min-shifted to be non-negative and normalized to mean
    1 over the selection (an all-equal weight column degrades to uniform).
    No passing runs yields an empty list.
    """
    core = _density_core(table, xdim, ydim, weight, f)
    if core is None:
        return []
    grid, x_extent, y_extent, dx, dy = core
    levels = np.percentile(grid, DENSITY_PERCENTILES)
    out: list[ContourPolyline] = []
    for pct, level in zip(DENSITY_PERCENTILES, levels):
        for contour in measure.find_contours(grid, float(level)):
            pts = tuple(
                (
                    float(x_extent[0] + (col + 0.5) * dx),
                    float(y_extent[0] + (row + 0.5) * dy),
                )
                for row, col in contour
            )
            closed = bool(np.allclose(contour[0], contour[-1]))
            out.append(
                ContourPolyline(level=float(level), percentile=int(pct), points=pts, closed=closed)
            )
    return out


def density_grid(
    table: RunTable,
    xdim: str,
    ydim: str,
    weight: str | None = None,
    f: FilterState | None = None,
) -> tuple[np.ndarray, tuple[float, float], tuple[float, float]]:
    """The normalized grid plus the unfiltered axis extents it spans
    (Riemann sum over its cells is 1 by construction)."""
    core = _density_core(table, xdim, ydim, weight, f)
    if core is None:
        raise EmptySelection("no passing runs")
    grid, x_extent, y_extent, _, _ = core
    return grid, x_extent, y_extent


@dataclass(frozen=True)
class BoxStats:
    """Five-number summary plus fenced whiskers and outlier run ids."""

    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    whisker_lo: float
    whisker_hi: float
    outliers: tuple[int, ...]

    def to_json_dict(self) -> dict:
        return {
            "min": self.minimum,
            "q1": self.q1,
            "median": self.median,
            "q3": self.q3,
            "max": self.maximum,
            "whisker_lo": self.whisker_lo,
            "whisker_hi": self.whisker_hi,
            "outliers": list(self.outliers),
        }


def _box_stats(values: np.ndarray, run_ids: np.ndarray) -> BoxStats:
    q1, med, q3 = (float(q) for q in np.quantile(values, (0.25, 0.5, 0.75)))
    iqr = q3 - q1
    lo_fence = q1 - WHISKER_REACH * iqr
    hi_fence = q3 + WHISKER_REACH * iqr
    inside = values[(values >= lo_fence) & (values <= hi_fence)]
    # Whiskers reach the outermost data point inside the fence but never
    # cross the box, so min <= whisker_lo <= q1 <= q3 <= whisker_hi <= max.
    whisker_lo = min(float(inside.min()), q1) if inside.size else q1
    whisker_hi = max(float(inside.max()), q3) if inside.size else q3
    out_mask = (values < lo_fence) | (values > hi_fence)
    return BoxStats(
        minimum=float(values.min()),
        q1=q1,
        median=med,
        q3=q3,
        maximum=float(values.max()),
        whisker_lo=whisker_lo,
        whisker_hi=whisker_hi,
        outliers=tuple(int(i) for i in run_ids[out_mask]),
    )


def boxplot_series(
    table: RunTable, dim1d: str, f: FilterState | None = None
) -> list[BoxStats]:
    """Per-position boxplots across the filtered-in runs of a 1D series dim.

    Quartiles use linear interpolation; whiskers reach the outermost data
    point within 1.5 IQR of the box. Raises EmptySelection when no run
    passes.
    """
    dim = table.dimension(dim1d)
    if dim.dtype is not Dtype.SERIES_1D:
        raise NonQuantitativeFilter(dim1d)
    mat = table.values(dim1d)
    mask = (
        apply_filters(table, f).pass_mask
        if f is not None
        else np.ones(table.run_count, dtype=bool)
    )
    if not mask.any():
        raise EmptySelection("no passing runs")
    run_ids = np.flatnonzero(mask)
    sub = mat[mask]
    return [_box_stats(sub[:, p], run_ids) for p in range(sub.shape[1])]


def cumulative_curve(table: RunTable, dim1d: str, run_id: int) -> np.ndarray:
    """Monotone cumulative signature of one run's 1D series.

    The series is shifted by its minimum only when negative values occur, so
    non-negative series accumulate as-is; the prefix sum is normalized to end
    at 1. A series with zero total mass degrades to the uniform ramp
    (i+1)/n, keeping the output monotone and ending at 1.
    """
    dim = table.dimension(dim1d)
    if dim.dtype is not Dtype.SERIES_1D:
        raise NonQuantitativeFilter(dim1d)
    if not 0 <= run_id < table.run_count:
        raise UnknownRun(run_id)
    series = table.values(dim1d)[run_id].astype(np.float64)
    lo = series.min()
    if lo < 0:
        series = series - lo
    prefix = np.cumsum(series)
    n = series.size
    if prefix[-1] <= 0:
        return (np.arange(n, dtype=np.float64) + 1.0) / n
    # Dividing by the final prefix value (not a separately summed total)
    # makes the curve end at exactly 1.0.
    return prefix / prefix[-1]
