"""Small-multiple display (SMD) layout rules.

Every MDMV option except the histogram expands into a grid of small
multiples. Columns come from the spatial fields: one for S1, one for S2, and
one for their union when both are filled (the scatterplot matrices skip the
union column since they already pair every axis with every other). Row one
encodes spatial channels only; each color-field dim adds a row tinted by it,
then each opacity-field dim adds a row, in field order.

Cells are concrete chart encodings. Two-axis charts holding more column dims
than axes encode the first two and expose X/Y switches; rows bound to one of
several channel dims expose a channel switch.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .design_space import (
    EncodingState,
    MarkClass,
    OPTIONS,
    VisOption,
    VisOptionId,
    mdmv_applicable,
)
from .errors import EngineError


class ColumnSource(str, Enum):
    S1 = "s1"
    S2 = "s2"
    S1_PLUS_S2 = "s1+s2"


class RowKind(str, Enum):
    SPATIAL_ONLY = "spatial_only"
    COLOR = "color"
    OPACITY = "opacity"


class Channel(str, Enum):
    X = "x"
    Y = "y"
    COLOR = "color"
    OPACITY = "opacity"


class NotApplicable(EngineError):
    def __init__(self, option, detail: str = ""):
        msg = f"option {getattr(option, 'value', option)} is not applicable here"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class NoSmd(EngineError):
    def __init__(self, option):
        super().__init__(
            f"option {getattr(option, 'value', option)} renders as a single chart, not a small-multiple grid"
        )


class OutOfRange(EngineError):
    pass


@dataclass(frozen=True)
class ColumnSpec:
    source: ColumnSource
    dims: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {"source": self.source.value, "dims": list(self.dims)}


@dataclass(frozen=True)
class RowSpec:
    kind: RowKind
    dim: str | None = None

    def to_json_dict(self) -> dict:
        return {"kind": self.kind.value, "dim": self.dim}


@dataclass(frozen=True)
class SwitchSpec:
    """One interactive encoding switch.

    X/Y switches are scoped to a column (two-axis chart with extra dims);
    color/opacity switches to a row (several channel dims, one active per
    row). Indices are 1-based like cell addresses.
    """

    channel: Channel
    candidates: tuple[str, ...]
    active: str
    column: int | None = None
    row: int | None = None

    def __post_init__(self):
        if self.active not in self.candidates:
            raise OutOfRange(f"switch active dim {self.active!r} not among candidates")

    def to_json_dict(self) -> dict:
        return {
            "channel": self.channel.value,
            "candidates": list(self.candidates),
            "active": self.active,
            "column": self.column,
            "row": self.row,
        }


@dataclass(frozen=True)
class CellSpec:
    """Concrete encodings for one chart instance.

    Two-axis options fill x/y; axis-list options (matrices, parallel
    coordinates, point scales) fill axes. spatial_fields names the encoding
    field each dim came from, parallel to dims. object_dim is only set for
    charts over 1D/2D objects, which never come from an SMD.
    """

    option: VisOptionId
    source: ColumnSource | None
    dims: tuple[str, ...]
    spatial_fields: tuple[str, ...]
    x: str | None = None
    y: str | None = None
    axes: tuple[str, ...] | None = None
    color: str | None = None
    opacity: str | None = None
    object_dim: str | None = None
    switches: tuple[SwitchSpec, ...] = ()

    def to_json_dict(self) -> dict:
        return {
            "option": self.option.value,
            "source": self.source.value if self.source else None,
            "dims": list(self.dims),
            "spatial_fields": list(self.spatial_fields),
            "x": self.x,
            "y": self.y,
            "axes": list(self.axes) if self.axes is not None else None,
            "color": self.color,
            "opacity": self.opacity,
            "object_dim": self.object_dim,
            "switches": [s.to_json_dict() for s in self.switches],
        }


@dataclass
class SmdLayout:
    """A complete small-multiple grid for one option under one encoding.

    cells[r][c] addresses row r+1, column c+1; selected_cell is 1-based and
    starts at (1, 1). detail_for moves it.
    """

    option: VisOptionId
    columns: tuple[ColumnSpec, ...]
    rows: tuple[RowSpec, ...]
    cells: tuple[tuple[CellSpec, ...], ...]
    switches: tuple[SwitchSpec, ...]
    selected_cell: tuple[int, int] = (1, 1)

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.rows), len(self.columns))

    def to_json_dict(self) -> dict:
        return {
            "option": self.option.value,
            "shape": list(self.shape),
            "columns": [c.to_json_dict() for c in self.columns],
            "rows": [r.to_json_dict() for r in self.rows],
            "cells": [[cell.to_json_dict() for cell in row] for row in self.cells],
            "switches": [s.to_json_dict() for s in self.switches],
            "selected_cell": list(self.selected_cell),
        }


_TWO_AXIS = (VisOptionId.SP, VisOptionId.WDCP)
_MATRICES = (VisOptionId.SPLOM, VisOptionId.RSPLOM)


def _column_specs(option: VisOptionId, enc: EncodingState) -> list[ColumnSpec]:
    cols = []
    if enc.s1:
        cols.append(ColumnSpec(ColumnSource.S1, enc.s1))
    if enc.s2:
        cols.append(ColumnSpec(ColumnSource.S2, enc.s2))
    if enc.s1 and enc.s2 and option not in _MATRICES:
        cols.append(ColumnSpec(ColumnSource.S1_PLUS_S2, enc.s1 + enc.s2))
    return cols


def _spatial_fields(source: ColumnSource, enc: EncodingState) -> tuple[str, ...]:
    if source is ColumnSource.S1:
        return ("s1",) * len(enc.s1)
    if source is ColumnSource.S2:
        return ("s2",) * len(enc.s2)
    return ("s1",) * len(enc.s1) + ("s2",) * len(enc.s2)


def layout_smd(option: VisOption | VisOptionId, enc: EncodingState) -> SmdLayout:
    """Build the small-multiple grid for an MDMV option.

    Raises NoSmd for options that render as a single chart (the histogram and
    all object views) and NotApplicable when the encoding does not admit the
    option at all.
    """
    opt = OPTIONS[option] if isinstance(option, VisOptionId) else option
    if not opt.has_smd:
        raise NoSmd(opt.id)
    if opt.id not in {o.id for o in mdmv_applicable(enc)}:
        raise NotApplicable(opt.id, "encoding does not admit it")

    columns = tuple(_column_specs(opt.id, enc))
    rows: list[RowSpec] = [RowSpec(RowKind.SPATIAL_ONLY)]
    rows += [RowSpec(RowKind.COLOR, d) for d in enc.color]
    rows += [RowSpec(RowKind.OPACITY, d) for d in enc.opacity]

    layout_switches: list[SwitchSpec] = []
    for c, col in enumerate(columns, start=1):
        if opt.id in _TWO_AXIS and len(col.dims) > 2:
            layout_switches.append(
                SwitchSpec(Channel.X, col.dims, col.dims[0], column=c)
            )
            layout_switches.append(
                SwitchSpec(Channel.Y, col.dims, col.dims[1], column=c)
            )
    for r, row in enumerate(rows, start=1):
        if row.kind is RowKind.COLOR and len(enc.color) > 1:
            layout_switches.append(
                SwitchSpec(Channel.COLOR, enc.color, row.dim, row=r)
            )
        elif row.kind is RowKind.OPACITY and len(enc.opacity) > 1:
            layout_switches.append(
                SwitchSpec(Channel.OPACITY, enc.opacity, row.dim, row=r)
            )

    grid: list[tuple[CellSpec, ...]] = []
    for r, row in enumerate(rows, start=1):
        line: list[CellSpec] = []
        for c, col in enumerate(columns, start=1):
            cell_switches = tuple(
                s for s in layout_switches if s.column == c or s.row == r
            )
            x = y = None
            axes = None
            if opt.id in _TWO_AXIS:
                x = col.dims[0]
                y = col.dims[1] if len(col.dims) > 1 else col.dims[0]
            else:
                axes = col.dims
            line.append(
                CellSpec(
                    option=opt.id,
                    source=col.source,
                    dims=col.dims,
                    spatial_fields=_spatial_fields(col.source, enc),
                    x=x,
                    y=y,
                    axes=axes,
                    color=row.dim if row.kind is RowKind.COLOR else None,
                    opacity=row.dim if row.kind is RowKind.OPACITY else None,
                    switches=cell_switches,
                )
            )
        grid.append(tuple(line))

    return SmdLayout(
        option=opt.id,
        columns=columns,
        rows=tuple(rows),
        cells=tuple(grid),
        switches=tuple(layout_switches),
    )


def detail_for(layout: SmdLayout, cell: tuple[int, int]) -> CellSpec:
    """Fetch one cell's encoding for the detail view; marks it selected."""
    r, c = cell
    n_rows, n_cols = layout.shape
    if not (1 <= r <= n_rows and 1 <= c <= n_cols):
        raise OutOfRange(f"cell {cell} outside {n_rows}x{n_cols} grid")
    layout.selected_cell = (r, c)
    return layout.cells[r - 1][c - 1]


def single_chart_cell(
    option: VisOptionId,
    enc: EncodingState,
    object_dim: str | None = None,
) -> CellSpec:
    """Cell for options without an SMD: the histogram and the object views.

    The histogram encodes the first spatial dim and exposes an X switch over
    all spatial dims when more are encoded. Object views carry the object dim
    only.
    """
    opt = OPTIONS[option]
    if opt.has_smd:
        raise NotApplicable(option, "use layout_smd for small-multiple options")
    if option is VisOptionId.HIST:
        dims = enc.s1 + enc.s2
        if not dims:
            raise NotApplicable(option, "no spatial dims encoded")
        fields = ("s1",) * len(enc.s1) + ("s2",) * len(enc.s2)
        switches = ()
        if len(dims) > 1:
            switches = (SwitchSpec(Channel.X, dims, dims[0]),)
        return CellSpec(
            option=option,
            source=None,
            dims=dims,
            spatial_fields=fields,
            x=dims[0],
            switches=switches,
        )
    if object_dim is None:
        raise NotApplicable(option, "object views need an object dim")
    return CellSpec(
        option=option,
        source=None,
        dims=(),
        spatial_fields=(),
        object_dim=object_dim,
    )
