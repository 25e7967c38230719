"""The fixed chart design space and the encoding state.

Thirteen visualization options cover the space: seven multi-dimensional
multi-variate (MDMV) charts for scalar dimensions, three views for 1D series
objects, three for 2D image objects. Every option is registered once with its
capability envelope (spatial slots, channel support, mark class, whether it
expands into a small-multiple display).

EncodingState captures what the user dropped onto the five encoding fields:
two spatial fields, color, opacity, and the object field. applicable_options
maps an encoding to the subset of options that can render it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

from .data_model import Dtype, RunTable
from .errors import EngineError

S1_CAPACITY = 15
S2_CAPACITY = 15
COLOR_CAPACITY = 4
OPACITY_CAPACITY = 4
OBJECT_CAPACITY = 2  # at most one 1D series and one 2D image ref

FIELDS = ("s1", "s2", "color", "opacity", "object")


class VisOptionId(str, Enum):
    SP = "SP"            # scatterplot
    WDCP = "wDCP"        # (weighted) density contour plot
    SPLOM = "SPLOM"      # scatterplot matrix
    RSPLOM = "rSPLOM"    # reduced scatterplot matrix (lower triangle)
    PSC = "PSc"          # point scales, one jittered axis per dim
    PC = "PC"            # parallel coordinates
    HIST = "Hist"        # histogram
    LINE1D = "Line1D"    # overplotted line graphs of 1D objects
    BOX1D = "Box1D"      # per-position boxplots over 1D objects
    CHIST1D = "CHist1D"  # cumulative curves of 1D objects
    GRID2D = "Grid2D"    # grid of 2D objects
    JUX2D = "Jux2D"      # juxtaposed 2D objects
    SUP2D = "Sup2D"      # superimposed (blended) 2D objects


class Category(str, Enum):
    MDMV = "mdmv"
    COMPLEX_1D = "complex_1d"
    COMPLEX_2D = "complex_2d"


class MarkClass(str, Enum):
    POINT_0D = "point_0d"
    LINE_1D = "line_1d"
    AREA_2D = "area_2d"
    OBJECT = "object"


@dataclass(frozen=True)
class VisOption:
    """Registry entry describing one chart option's capabilities."""

    id: VisOptionId
    category: Category
    spatial_min: int
    spatial_max: int
    supports_color: bool
    supports_opacity: bool
    mark_class: MarkClass
    has_smd: bool


def _mdmv(opt, lo, hi, mark, smd=True, color=True, opacity=True):
    return VisOption(opt, Category.MDMV, lo, hi, color, opacity, mark, smd)


# The spatial bounds describe one chart instance; columns holding more dims
# than spatial_max encode the first slots and expose switches for the rest.
OPTIONS: dict[VisOptionId, VisOption] = {
    o.id: o
    for o in (
        _mdmv(VisOptionId.SP, 2, 2, MarkClass.POINT_0D),
        _mdmv(VisOptionId.WDCP, 2, 2, MarkClass.LINE_1D),
        _mdmv(VisOptionId.SPLOM, 3, S1_CAPACITY + S2_CAPACITY, MarkClass.POINT_0D),
        _mdmv(VisOptionId.RSPLOM, 3, S1_CAPACITY + S2_CAPACITY, MarkClass.POINT_0D),
        _mdmv(VisOptionId.PSC, 1, S1_CAPACITY + S2_CAPACITY, MarkClass.POINT_0D),
        _mdmv(VisOptionId.PC, 1, S1_CAPACITY + S2_CAPACITY, MarkClass.LINE_1D),
        _mdmv(VisOptionId.HIST, 1, 1, MarkClass.AREA_2D, smd=False, color=False, opacity=False),
        VisOption(VisOptionId.LINE1D, Category.COMPLEX_1D, 0, 0, True, True, MarkClass.OBJECT, False),
        VisOption(VisOptionId.BOX1D, Category.COMPLEX_1D, 0, 0, False, False, MarkClass.OBJECT, False),
        VisOption(VisOptionId.CHIST1D, Category.COMPLEX_1D, 0, 0, True, True, MarkClass.OBJECT, False),
        VisOption(VisOptionId.GRID2D, Category.COMPLEX_2D, 0, 0, False, False, MarkClass.OBJECT, False),
        VisOption(VisOptionId.JUX2D, Category.COMPLEX_2D, 0, 0, False, False, MarkClass.OBJECT, False),
        VisOption(VisOptionId.SUP2D, Category.COMPLEX_2D, 0, 0, False, False, MarkClass.OBJECT, False),
    )
}

OPTION_ORDER: tuple[VisOptionId, ...] = tuple(OPTIONS)

MDMV_OPTIONS = tuple(o for o in OPTIONS.values() if o.category is Category.MDMV)

# A 2x2 scatterplot matrix is just a scatterplot; matrices only appear once
# three spatial dims are encoded in total.
MATRIX_MIN_TOTAL_SPATIAL = 3


class InvalidEncoding(EngineError):
    pass


@dataclass(frozen=True)
class EncodingState:
    """Dimension names dropped onto the five encoding fields.

    Structural rules (uniqueness, disjoint spatial fields, capacities) are
    enforced on construction; dtype rules need the table and live in
    validate_encoding.
    """

    s1: tuple[str, ...] = ()
    s2: tuple[str, ...] = ()
    color: tuple[str, ...] = ()
    opacity: tuple[str, ...] = ()
    object: tuple[str, ...] = ()

    def __post_init__(self):
        for fname in FIELDS:
            entries = getattr(self, fname)
            if not isinstance(entries, tuple):
                object.__setattr__(self, fname, tuple(entries))
                entries = getattr(self, fname)
            if len(set(entries)) != len(entries):
                raise InvalidEncoding(f"field {fname!r} repeats a dimension")
        if set(self.s1) & set(self.s2):
            raise InvalidEncoding("a dimension cannot sit in both spatial fields")
        caps = {
            "s1": S1_CAPACITY,
            "s2": S2_CAPACITY,
            "color": COLOR_CAPACITY,
            "opacity": OPACITY_CAPACITY,
            "object": OBJECT_CAPACITY,
        }
        for fname, cap in caps.items():
            if len(getattr(self, fname)) > cap:
                raise InvalidEncoding(f"field {fname!r} holds more than {cap} dimensions")

    @property
    def total_spatial(self) -> int:
        return len(self.s1) + len(self.s2)

    def field(self, name: str) -> tuple[str, ...]:
        if name not in FIELDS:
            raise InvalidEncoding(f"unknown encoding field: {name!r}")
        return getattr(self, name)

    def field_of(self, dim: str) -> str | None:
        for fname in FIELDS:
            if dim in getattr(self, fname):
                return fname
        return None

    @classmethod
    def from_json_dict(cls, data) -> "EncodingState":
        if not isinstance(data, dict):
            raise InvalidEncoding("encoding must be a JSON object")
        unknown = set(data) - set(FIELDS)
        if unknown:
            raise InvalidEncoding(f"unknown encoding fields: {sorted(unknown)}")
        kwargs = {}
        for fname in FIELDS:
            entries = data.get(fname, [])
            if not isinstance(entries, (list, tuple)) or not all(
                isinstance(e, str) for e in entries
            ):
                raise InvalidEncoding(f"field {fname!r} must be a list of dimension names")
            kwargs[fname] = tuple(entries)
        return cls(**kwargs)

    def to_json_dict(self) -> dict:
        return {fname: list(getattr(self, fname)) for fname in FIELDS}


def validate_encoding(enc: EncodingState, table: RunTable) -> None:
    """Dtype rules: spatial/color/opacity take Quantitative dims only, the
    object field takes at most one Series1D and one ImageRef2D."""
    for fname in ("s1", "s2", "color", "opacity"):
        for name in enc.field(fname):
            dim = table.dimension(name)
            if dim.dtype is not Dtype.QUANTITATIVE:
                raise InvalidEncoding(
                    f"field {fname!r} only takes quantitative dims, {name!r} is {dim.dtype.value}"
                )
    kinds: list[Dtype] = []
    for name in enc.object:
        dim = table.dimension(name)
        if dim.dtype is Dtype.QUANTITATIVE:
            raise InvalidEncoding(f"object field does not take quantitative dims ({name!r})")
        kinds.append(dim.dtype)
    if kinds.count(Dtype.SERIES_1D) > 1 or kinds.count(Dtype.IMAGE_REF_2D) > 1:
        raise InvalidEncoding("object field holds one series and one image slot")


def object_dims_by_kind(enc: EncodingState, table: RunTable) -> dict[Dtype, str]:
    """Map object-field dtypes to the encoded dimension name."""
    out: dict[Dtype, str] = {}
    for name in enc.object:
        out[table.dimension(name).dtype] = name
    return out


def mdmv_applicable(enc: EncodingState) -> list[VisOption]:
    """MDMV options renderable for the spatial fields alone (pure in enc).

    Every MDMV option renders from one spatial dim up (two-axis charts
    duplicate a single dim on both axes); the matrices need
    MATRIX_MIN_TOTAL_SPATIAL dims in total.
    """
    total = enc.total_spatial
    if total == 0:
        return []
    out = []
    for opt in MDMV_OPTIONS:
        if opt.id in (VisOptionId.SPLOM, VisOptionId.RSPLOM) and total < MATRIX_MIN_TOTAL_SPATIAL:
            continue
        out.append(opt)
    return out


def applicable_options(enc: EncodingState, table: RunTable) -> list[VisOption]:
    """All options renderable under the current encoding, in registry order."""
    validate_encoding(enc, table)
    chosen = {o.id for o in mdmv_applicable(enc)}
    for kind in object_dims_by_kind(enc, table):
        if kind is Dtype.SERIES_1D:
            chosen.update((VisOptionId.LINE1D, VisOptionId.BOX1D, VisOptionId.CHIST1D))
        elif kind is Dtype.IMAGE_REF_2D:
            chosen.update((VisOptionId.GRID2D, VisOptionId.JUX2D, VisOptionId.SUP2D))
    return [OPTIONS[oid] for oid in OPTION_ORDER if oid in chosen]
