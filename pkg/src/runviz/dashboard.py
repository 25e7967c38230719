"""Dashboard document model: placed views, sliders, modes, spec emission.

A dashboard is a document: views placed on an abstract integer grid, one
range slider per quantitative dimension any view encodes, a filter state, and
an edit/analyze mode switch. All operations are functional (they return a new
document and never touch the input), the document round-trips losslessly
through JSON, and emit_specs turns it into renderable chart specs plus the
analytics payload each chart needs under the current filter.

Analyze mode freezes the layout: adding, moving/resizing, and attribute edits
are rejected; filtering, run selection, and mode switching always work.
"""

from __future__ import annotations

import copy
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import analytics
from .analytics import FilterState
from .data_model import Dtype, RunTable, UnknownDimension
from .design_space import OPTIONS, VisOptionId
from .errors import EngineError
from .layout import CellSpec, ColumnSource, SwitchSpec, Channel

COLOR_SCHEMES = ("sequential", "diverging", "uncertainty")
BLEND_MODES = ("multiply", "screen", "overlay", "difference")
PRESELECT_COUNT_DEFAULT = 3

STYLE_DEFAULTS: Mapping[str, object] = {
    "color_scheme": "sequential",
    "bin_count": analytics.HISTOGRAM_BINS_DEFAULT,
    "point_size": 3,
    "blend_mode": "multiply",
    "hide_filtered": False,
    "preselect_count": PRESELECT_COUNT_DEFAULT,
}


class Mode(str, Enum):
    EDIT = "edit"
    ANALYZE = "analyze"


class NotEditMode(EngineError):
    def __init__(self, op: str):
        super().__init__(f"{op} requires edit mode")


class UnknownView(EngineError):
    def __init__(self, view_id):
        super().__init__(f"unknown view id: {view_id!r}")


class InvalidRect(EngineError):
    pass


class InvalidPatch(EngineError):
    pass


class IncompatibleCell(EngineError):
    pass


@dataclass(frozen=True)
class Rect:
    """Grid placement in abstract integer units; w and h are at least 1."""

    x: int
    y: int
    w: int
    h: int

    def __post_init__(self):
        for name in ("x", "y", "w", "h"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool):
                raise InvalidRect(f"rect.{name} must be an integer")
        if self.x < 0 or self.y < 0:
            raise InvalidRect("rect position must be non-negative")
        if self.w < 1 or self.h < 1:
            raise InvalidRect("rect width and height must be at least 1")

    def to_json_dict(self) -> dict:
        return {"x": self.x, "y": self.y, "w": self.w, "h": self.h}

    @classmethod
    def from_json_dict(cls, data) -> "Rect":
        if not isinstance(data, dict) or set(data) - {"x", "y", "w", "h"}:
            raise InvalidRect("rect must be {x, y, w, h}")
        try:
            return cls(data["x"], data["y"], data["w"], data["h"])
        except KeyError as exc:
            raise InvalidRect(f"rect is missing {exc.args[0]!r}") from None


@dataclass(frozen=True)
class SliderSpec:
    """One range slider; extent is the unfiltered min/max of the dimension,
    field names the encoding field that put the dimension on screen (used for
    tinting)."""

    dimension: str
    extent: tuple[float, float]
    field: str

    def current(self, f: FilterState) -> tuple[float, float]:
        return tuple(f.ranges.get(self.dimension, self.extent))

    def to_json_dict(self, f: FilterState) -> dict:
        cur = self.current(f)
        return {
            "dimension": self.dimension,
            "extent": [self.extent[0], self.extent[1]],
            "current": [cur[0], cur[1]],
            "field": self.field,
        }


@dataclass(frozen=True)
class PlacedView:
    """One chart on the dashboard: a cell encoding (or an opaque external
    spec) plus placement and style overrides."""

    view_id: int
    rect: Rect
    cell: CellSpec | None = None
    external: Mapping | None = None
    style: Mapping[str, object] = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        return {
            "view_id": self.view_id,
            "rect": self.rect.to_json_dict(),
            "cell": self.cell.to_json_dict() if self.cell else None,
            "external": copy.deepcopy(dict(self.external)) if self.external else None,
            "style": dict(self.style),
        }


@dataclass(frozen=True)
class DashboardDoc:
    views: tuple[PlacedView, ...] = ()
    sliders: tuple[SliderSpec, ...] = ()
    mode: Mode = Mode.EDIT
    filter_state: FilterState = field(default_factory=FilterState)
    next_view_id: int = 1

    def view(self, view_id: int) -> PlacedView:
        for v in self.views:
            if v.view_id == view_id:
                return v
        raise UnknownView(view_id)

    def to_json_dict(self) -> dict:
        return {
            "views": [v.to_json_dict() for v in self.views],
            "sliders": [s.to_json_dict(self.filter_state) for s in self.sliders],
            "mode": self.mode.value,
            "filter_state": self.filter_state.to_json_dict(),
            "next_view_id": self.next_view_id,
        }


def _require_edit(doc: DashboardDoc, op: str) -> None:
    if doc.mode is not Mode.EDIT:
        raise NotEditMode(op)


def _validate_cell(cell: CellSpec, table: RunTable) -> None:
    opt = OPTIONS[cell.option]
    named = list(cell.dims)
    for extra in (cell.x, cell.y, cell.color, cell.opacity):
        if extra is not None:
            named.append(extra)
    if cell.axes:
        named.extend(cell.axes)
    for name in named:
        dim = table.dimension(name)
        if dim.dtype is not Dtype.QUANTITATIVE:
            raise IncompatibleCell(f"{name!r} is not quantitative")
    if cell.color is not None and not opt.supports_color:
        raise IncompatibleCell(f"{cell.option.value} does not support a color channel")
    if cell.opacity is not None and not opt.supports_opacity:
        raise IncompatibleCell(f"{cell.option.value} does not support an opacity channel")
    if opt.category.value.startswith("complex"):
        if cell.object_dim is None:
            raise IncompatibleCell(f"{cell.option.value} needs an object dimension")
        odim = table.dimension(cell.object_dim)
        want = Dtype.SERIES_1D if opt.category.value == "complex_1d" else Dtype.IMAGE_REF_2D
        if odim.dtype is not want:
            raise IncompatibleCell(
                f"{cell.option.value} takes a {want.value} object, {cell.object_dim!r} is {odim.dtype.value}"
            )
    else:
        if not cell.dims:
            raise IncompatibleCell(f"{cell.option.value} needs spatial dimensions")


def _view_quant_dims(view: PlacedView, table: RunTable) -> list[tuple[str, str]]:
    """(dimension, field) pairs a view puts on screen, deduped in order."""
    pairs: list[tuple[str, str]] = []
    if view.cell is not None:
        cell = view.cell
        for dim, fname in zip(cell.dims, cell.spatial_fields):
            pairs.append((dim, fname))
        if cell.color:
            pairs.append((cell.color, "color"))
        if cell.opacity:
            pairs.append((cell.opacity, "opacity"))
    elif view.external is not None:
        for name in _external_fields(view.external):
            if table.has_dimension(name) and table.dimension(name).dtype is Dtype.QUANTITATIVE:
                pairs.append((name, "s1"))
    seen = set()
    out = []
    for dim, fname in pairs:
        if dim not in seen:
            seen.add(dim)
            out.append((dim, fname))
    return out


def _rebuild_sliders(
    views: Sequence[PlacedView], table: RunTable, old: Sequence[SliderSpec]
) -> tuple[SliderSpec, ...]:
    by_dim = {s.dimension: s for s in old}
    sliders: list[SliderSpec] = []
    seen: set[str] = set()
    for view in views:
        for dim, fname in _view_quant_dims(view, table):
            if dim in seen:
                continue
            seen.add(dim)
            if dim in by_dim:
                sliders.append(by_dim[dim])
            else:
                col = table.values(dim)
                sliders.append(
                    SliderSpec(
                        dimension=dim,
                        extent=(float(col.min()), float(col.max())),
                        field=fname,
                    )
                )
    return tuple(sliders)


def _external_fields(blob: Mapping) -> list[str]:
    """Every string under a "field" key, recursively, in encounter order."""
    found: list[str] = []

    def walk(node):
        if isinstance(node, Mapping):
            for key, value in node.items():
                if key == "field" and isinstance(value, str):
                    found.append(value)
                walk(value)
        elif isinstance(node, (list, tuple)):
            for item in node:
                walk(item)

    walk(blob)
    return found


def add_view(
    doc: DashboardDoc,
    table: RunTable,
    cell: CellSpec,
    rect: Rect | None = None,
) -> DashboardDoc:
    """Copy a chart encoding onto the dashboard; creates missing sliders."""
    _require_edit(doc, "add_view")
    _validate_cell(cell, table)
    rect = rect or _default_rect(doc)
    view = PlacedView(view_id=doc.next_view_id, rect=rect, cell=cell)
    views = doc.views + (view,)
    return replace(
        doc,
        views=views,
        sliders=_rebuild_sliders(views, table, doc.sliders),
        next_view_id=doc.next_view_id + 1,
    )


def add_external_view(
    doc: DashboardDoc,
    table: RunTable,
    spec: Mapping,
    rect: Rect | None = None,
) -> DashboardDoc:
    """Place a third-party chart spec. The blob stays opaque except that every
    "field" reference must name an existing dimension."""
    _require_edit(doc, "add_view")
    if not isinstance(spec, Mapping):
        raise InvalidPatch("external spec must be a JSON object")
    for name in _external_fields(spec):
        if not table.has_dimension(name):
            raise UnknownDimension(name)
    rect = rect or _default_rect(doc)
    view = PlacedView(
        view_id=doc.next_view_id, rect=rect, external=copy.deepcopy(dict(spec))
    )
    views = doc.views + (view,)
    return replace(
        doc,
        views=views,
        sliders=_rebuild_sliders(views, table, doc.sliders),
        next_view_id=doc.next_view_id + 1,
    )


def _default_rect(doc: DashboardDoc) -> Rect:
    # Stack new views in a simple 2-wide flow; callers can move them later.
    n = len(doc.views)
    return Rect(x=(n % 2) * 6, y=(n // 2) * 4, w=6, h=4)


def move_resize(
    doc: DashboardDoc, table: RunTable, view_id: int, rect: Rect | Mapping
) -> DashboardDoc:
    _require_edit(doc, "move_resize")
    if not isinstance(rect, Rect):
        rect = Rect.from_json_dict(rect)
    target = doc.view(view_id)
    views = tuple(
        replace(v, rect=rect) if v.view_id == target.view_id else v for v in doc.views
    )
    return replace(doc, views=views)


_STYLE_VALIDATORS = {
    "color_scheme": lambda v: v in COLOR_SCHEMES,
    "bin_count": lambda v: isinstance(v, int) and not isinstance(v, bool) and v >= 1,
    "point_size": lambda v: isinstance(v, (int, float)) and not isinstance(v, bool) and v > 0,
    "blend_mode": lambda v: v in BLEND_MODES,
    "hide_filtered": lambda v: isinstance(v, bool),
    "preselect_count": lambda v: isinstance(v, int) and not isinstance(v, bool) and v >= 0,
}


def edit_attributes(
    doc: DashboardDoc, table: RunTable, view_id: int, patch: Mapping
) -> DashboardDoc:
    """Merge style overrides into a view; {"remove": true} deletes it (and
    drops sliders nothing references anymore). Unknown keys or bad values
    raise InvalidPatch."""
    _require_edit(doc, "edit_attributes")
    target = doc.view(view_id)
    if not isinstance(patch, Mapping):
        raise InvalidPatch("patch must be a JSON object")
    if patch.get("remove") is True:
        views = tuple(v for v in doc.views if v.view_id != view_id)
        return replace(doc, views=views, sliders=_rebuild_sliders(views, table, doc.sliders))
    style = dict(target.style)
    for key, value in patch.items():
        if key == "remove":
            raise InvalidPatch('"remove" must be exactly true')
        validator = _STYLE_VALIDATORS.get(key)
        if validator is None:
            raise InvalidPatch(f"unknown attribute: {key!r}")
        if not validator(value):
            raise InvalidPatch(f"bad value for {key!r}: {value!r}")
        style[key] = value
    views = tuple(
        replace(v, style=style) if v.view_id == view_id else v for v in doc.views
    )
    return replace(doc, views=views)


def set_mode(doc: DashboardDoc, mode: Mode | str) -> DashboardDoc:
    try:
        mode = Mode(mode)
    except ValueError:
        raise InvalidPatch(f"unknown mode: {mode!r}") from None
    return replace(doc, mode=mode)


def set_filters(doc: DashboardDoc, table: RunTable, f: FilterState) -> DashboardDoc:
    """Replace the document's filter state (allowed in both modes)."""
    for name in f.ranges:
        dim = table.dimension(name)
        if dim.dtype is not Dtype.QUANTITATIVE:
            raise analytics.NonQuantitativeFilter(name)
    if f.selected_run is not None:
        analytics.select_run(table, f, f.selected_run)
    return replace(doc, filter_state=f)


def effective_style(view: PlacedView) -> dict:
    style = dict(STYLE_DEFAULTS)
    style.update(view.style)
    return style


def vis_spec(cell: CellSpec, table: RunTable, style: Mapping | None = None) -> dict:
    """Renderable chart spec for one cell encoding."""
    merged = dict(STYLE_DEFAULTS)
    if style:
        merged.update(style)
    spec = {
        "vis_type": cell.option.value,
        "data_ref": table.table_id,
        "encodings": {
            "x": cell.x,
            "y": cell.y,
            "axes": list(cell.axes) if cell.axes is not None else None,
            "color": cell.color,
            "opacity": cell.opacity,
            "object": cell.object_dim,
        },
        "style": merged,
        "interaction": {"filterable": True, "selectable": True},
    }
    if cell.switches:
        spec["switches"] = [s.to_json_dict() for s in cell.switches]
    return spec


def _vis_spec(view: PlacedView, table: RunTable) -> dict:
    return vis_spec(view.cell, table, view.style)


def _columns_payload(table: RunTable, dims: Iterable[str]) -> dict:
    return {d: [float(v) for v in table.values(d)] for d in dims}


def _image_items(table: RunTable, dim: str, run_ids: Iterable[int]) -> list[dict]:
    col = table.values(dim)
    return [{"run": int(r), "ref": col[int(r)]} for r in run_ids]


def _payload(view: PlacedView, table: RunTable, f: FilterState, result) -> dict:
    cell = view.cell
    style = effective_style(view)
    pass_ids = result.pass_ids()
    preselect = pass_ids[: int(style["preselect_count"])]
    opt = cell.option
    if opt in (VisOptionId.SP, VisOptionId.SPLOM, VisOptionId.RSPLOM, VisOptionId.PSC, VisOptionId.PC):
        dims = list(cell.dims)
        for extra in (cell.color, cell.opacity):
            if extra and extra not in dims:
                dims.append(extra)
        return {
            "kind": "runs",
            "columns": _columns_payload(table, dims),
            "pass": pass_ids,
            "selected": f.selected_run,
            "preselected": preselect,
        }
    if opt is VisOptionId.WDCP:
        contours = analytics.density_contours(
            table, cell.x, cell.y, weight=cell.color, f=f
        )
        return {
            "kind": "contours",
            "x": cell.x,
            "y": cell.y,
            "contours": [c.to_json_dict() for c in contours],
            "pass": pass_ids,
            "columns": _columns_payload(table, {cell.x, cell.y}),
            "selected": f.selected_run,
        }
    if opt is VisOptionId.HIST:
        bins = analytics.histogram(table, cell.x, f=f, bins=int(style["bin_count"]))
        return {
            "kind": "histogram",
            "dim": cell.x,
            "bins": [b.to_json_dict() for b in bins],
        }
    if opt is VisOptionId.LINE1D:
        mat = table.values(cell.object_dim)
        return {
            "kind": "series",
            "object": cell.object_dim,
            "length": int(mat.shape[1]),
            "runs": pass_ids,
            "series": {str(r): [float(v) for v in mat[r]] for r in pass_ids},
            "selected": f.selected_run,
        }
    if opt is VisOptionId.BOX1D:
        try:
            stats = analytics.boxplot_series(table, cell.object_dim, f=f)
        except analytics.EmptySelection:
            stats = []
        return {
            "kind": "box_series",
            "object": cell.object_dim,
            "positions": [s.to_json_dict() for s in stats],
        }
    if opt is VisOptionId.CHIST1D:
        curves = {
            str(r): [float(v) for v in analytics.cumulative_curve(table, cell.object_dim, r)]
            for r in pass_ids
        }
        return {
            "kind": "cumulative",
            "object": cell.object_dim,
            "runs": pass_ids,
            "curves": curves,
            "selected": f.selected_run,
        }
    if opt is VisOptionId.GRID2D:
        if style["hide_filtered"]:
            items = _image_items(table, cell.object_dim, pass_ids)
        else:
            items = _image_items(table, cell.object_dim, range(table.run_count))
            passing = set(pass_ids)
            for item in items:
                item["pass"] = item["run"] in passing
        return {"kind": "images", "object": cell.object_dim, "items": items}
    if opt in (VisOptionId.JUX2D, VisOptionId.SUP2D):
        chosen: list[int] = []
        if f.selected_run is not None:
            chosen.append(f.selected_run)
        for r in preselect:
            if r not in chosen:
                chosen.append(r)
        payload = {
            "kind": "images_jux" if opt is VisOptionId.JUX2D else "images_sup",
            "object": cell.object_dim,
            "items": _image_items(table, cell.object_dim, chosen),
        }
        if opt is VisOptionId.SUP2D:
            payload["blend_mode"] = style["blend_mode"]
        return payload
    raise IncompatibleCell(f"no payload emitter for {opt.value}")


def emit_specs(
    doc: DashboardDoc, table: RunTable, f: FilterState | None = None
) -> list[dict]:
    """Renderable spec + analytics payload per view, ordered by view id."""
    f = doc.filter_state if f is None else f
    result = analytics.apply_filters(table, f)
    out = []
    for view in sorted(doc.views, key=lambda v: v.view_id):
        entry = {"view_id": view.view_id, "rect": view.rect.to_json_dict()}
        if view.external is not None:
            entry["spec"] = copy.deepcopy(dict(view.external))
            entry["payload"] = {"kind": "external", "pass": result.pass_ids()}
        else:
            entry["spec"] = _vis_spec(view, table)
            entry["payload"] = _payload(view, table, f, result)
        out.append(entry)
    return out


def doc_from_json_dict(data: Mapping, table: RunTable | None = None) -> DashboardDoc:
    """Rebuild a document from its JSON form.

    With a table, every dimension reference is re-validated and the slider
    set is rebuilt from the views (authoritative). Without one, validation is
    structural only and the stored sliders are kept as written.
    """
    if not isinstance(data, Mapping):
        raise InvalidPatch("dashboard document must be a JSON object")
    f = FilterState.from_json_dict(data.get("filter_state", {}))
    doc = DashboardDoc(
        mode=Mode(data.get("mode", "edit")),
        filter_state=f,
        next_view_id=int(data.get("next_view_id", 1)),
    )
    views: list[PlacedView] = []
    for raw in data.get("views", []):
        rect = Rect.from_json_dict(raw.get("rect", {}))
        if raw.get("external") is not None:
            blob = raw["external"]
            if table is not None:
                for name in _external_fields(blob):
                    if not table.has_dimension(name):
                        raise UnknownDimension(name)
            view = PlacedView(
                view_id=int(raw["view_id"]), rect=rect, external=copy.deepcopy(dict(blob))
            )
        else:
            cell = _cell_from_json(raw.get("cell"))
            if table is not None:
                _validate_cell(cell, table)
            view = PlacedView(view_id=int(raw["view_id"]), rect=rect, cell=cell)
        style = raw.get("style", {})
        if style:
            for key, value in style.items():
                validator = _STYLE_VALIDATORS.get(key)
                if validator is None or not validator(value):
                    raise InvalidPatch(f"bad stored style {key!r}: {value!r}")
            view = replace(view, style=dict(style))
        views.append(view)
    ids = [v.view_id for v in views]
    if len(set(ids)) != len(ids):
        raise InvalidPatch("duplicate view ids")
    doc = replace(doc, views=tuple(views))
    if table is not None:
        doc = replace(doc, sliders=_rebuild_sliders(doc.views, table, ()))
    else:
        doc = replace(doc, sliders=_sliders_from_json(data.get("sliders", [])))
    if doc.next_view_id <= max(ids, default=0):
        raise InvalidPatch("next_view_id must exceed every view id")
    return doc


def _sliders_from_json(raw) -> tuple[SliderSpec, ...]:
    sliders = []
    for entry in raw:
        if not isinstance(entry, Mapping):
            raise InvalidPatch("slider entries must be objects")
        try:
            extent = entry["extent"]
            sliders.append(
                SliderSpec(
                    dimension=str(entry["dimension"]),
                    extent=(float(extent[0]), float(extent[1])),
                    field=str(entry.get("field", "s1")),
                )
            )
        except (KeyError, IndexError, TypeError, ValueError):
            raise InvalidPatch(f"bad slider entry: {entry!r}") from None
    return tuple(sliders)


def _cell_from_json(raw) -> CellSpec:
    if not isinstance(raw, Mapping):
        raise InvalidPatch("view cell must be a JSON object")
    try:
        option = VisOptionId(raw["option"])
    except (KeyError, ValueError):
        raise InvalidPatch(f"bad cell option: {raw.get('option')!r}") from None
    switches = tuple(
        SwitchSpec(
            channel=Channel(s["channel"]),
            candidates=tuple(s["candidates"]),
            active=s["active"],
            column=s.get("column"),
            row=s.get("row"),
        )
        for s in raw.get("switches", ())
    )
    source = raw.get("source")
    return CellSpec(
        option=option,
        source=ColumnSource(source) if source else None,
        dims=tuple(raw.get("dims", ())),
        spatial_fields=tuple(raw.get("spatial_fields", ())),
        x=raw.get("x"),
        y=raw.get("y"),
        axes=tuple(raw["axes"]) if raw.get("axes") is not None else None,
        color=raw.get("color"),
        opacity=raw.get("opacity"),
        object_dim=raw.get("object_dim"),
        switches=switches,
    )
