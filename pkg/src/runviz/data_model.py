"""Columnar run tables: CSV ingestion, dimension typing, metadata.

A run table holds the sampled behavior of a computational model, one row per
run. Columns ("dimensions") are typed as scalar numbers (Quantitative),
fixed-length numeric arrays (Series1D), or references to 2D images
(ImageRef2D). Each dimension additionally carries a data-flow role (control
input, environmental input, direct output, derived output, uncertainty) and a
sampling scheme (regular grid vs stochastic), which downstream recommendation
rules consume. Roles and sampling are never inferred from values; they come
from a sidecar mapping or explicit calls.

Contents: Dtype/Role/Sampling enums, Dimension, RunTable, IngestOptions,
infer_dtype, load_csv, serialize, set_metadata, apply_sidecar, and the
ingestion error types.
"""

from __future__ import annotations

import csv
import hashlib
import io
import json
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Iterable, Mapping, Sequence
from urllib.parse import urlsplit

import numpy as np

from .errors import EngineError

MAX_RUNS_DEFAULT = 1000

IMAGE_EXTENSIONS = (".png", ".jpg", ".jpeg", ".gif", ".webp", ".svg")


class Dtype(str, Enum):
    QUANTITATIVE = "quantitative"
    SERIES_1D = "series_1d"
    IMAGE_REF_2D = "image_ref_2d"


class Role(str, Enum):
    INPUT_CONTROL = "input_control"
    INPUT_ENVIRONMENTAL = "input_environmental"
    OUTPUT_DIRECT = "output_direct"
    OUTPUT_DERIVED = "output_derived"
    UNCERTAINTY = "uncertainty"
    UNASSIGNED = "unassigned"


class Sampling(str, Enum):
    REGULAR = "regular"
    STOCHASTIC = "stochastic"
    UNKNOWN = "unknown"


class EmptyInput(EngineError):
    pass


class DuplicateHeader(EngineError):
    def __init__(self, name: str):
        super().__init__(f"duplicate column name: {name!r}")
        self.name = name


class RowArityMismatch(EngineError):
    def __init__(self, row: int, expected: int, got: int):
        super().__init__(f"row {row} has {got} cells, header has {expected}")
        self.row = row


class TypeConflict(EngineError):
    def __init__(self, column: str, row: int, detail: str = ""):
        msg = f"cell ({column!r}, row {row}) violates the column dtype"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)
        self.column = column
        self.row = row


class SeriesLengthMismatch(EngineError):
    def __init__(self, column: str, row: int, expected: int, got: int):
        super().__init__(
            f"series cell ({column!r}, row {row}) has length {got}, expected {expected}"
        )
        self.column = column
        self.row = row


class RunLimitExceeded(EngineError):
    def __init__(self, count: int, limit: int):
        super().__init__(f"table has {count} runs, limit is {limit}")
        self.count = count
        self.limit = limit


class MixedTypes(EngineError):
    def __init__(self, column: str):
        super().__init__(f"column {column!r} mixes incompatible cell types")
        self.column = column


class AllEmpty(EngineError):
    def __init__(self, column: str):
        super().__init__(f"column {column!r} has no non-empty cells")
        self.column = column


class UnknownDimension(EngineError):
    def __init__(self, name: str):
        super().__init__(f"unknown dimension: {name!r}")
        self.name = name


class MetadataError(EngineError):
    pass


@dataclass(frozen=True)
class Dimension:
    """Typed, annotated table column."""

    name: str
    dtype: Dtype
    role: Role = Role.UNASSIGNED
    sampling: Sampling = Sampling.UNKNOWN
    series_length: int | None = None

    def __post_init__(self):
        if self.dtype is Dtype.SERIES_1D:
            if not isinstance(self.series_length, int) or self.series_length < 1:
                raise MetadataError(
                    f"dimension {self.name!r}: series_length must be a positive int"
                )
        elif self.series_length is not None:
            raise MetadataError(
                f"dimension {self.name!r}: series_length only applies to series columns"
            )

    def to_json_dict(self) -> dict:
        d = {
            "name": self.name,
            "dtype": self.dtype.value,
            "role": self.role.value,
            "sampling": self.sampling.value,
        }
        if self.series_length is not None:
            d["series_length"] = self.series_length
        return d


@dataclass(frozen=True)
class Run:
    """One table row: a run id plus its values keyed by dimension name."""

    id: int
    values: Mapping[str, object]


@dataclass(frozen=True)
class IngestOptions:
    """Knobs for load_csv.

    max_runs caps the table size (service/CLI may override it from the
    environment). dtypes forces column dtypes instead of inferring them; a
    cell that does not parse under the forced dtype raises TypeConflict.
    """

    max_runs: int = MAX_RUNS_DEFAULT
    dtypes: Mapping[str, Dtype] | None = None


class RunTable:
    """Immutable columnar run table.

    Quantitative columns are read-only float64 arrays, Series1D columns
    read-only (runs x length) float64 arrays, ImageRef2D columns tuples of
    strings. Run ids are the row indices 0..run_count-1.
    """

    def __init__(self, dimensions: Sequence[Dimension], columns: Mapping[str, object]):
        names = [d.name for d in dimensions]
        if len(set(names)) != len(names):
            raise MetadataError("dimension names must be unique")
        if set(columns) != set(names):
            raise MetadataError("columns and dimensions must match")
        counts = set()
        frozen: dict[str, object] = {}
        for dim in dimensions:
            col = columns[dim.name]
            if dim.dtype is Dtype.IMAGE_REF_2D:
                col = tuple(str(v) for v in col)
                counts.add(len(col))
            else:
                arr = np.asarray(col, dtype=np.float64)
                want = 1 if dim.dtype is Dtype.QUANTITATIVE else 2
                if arr.ndim != want:
                    raise MetadataError(
                        f"column {dim.name!r}: expected {want}-dimensional data"
                    )
                if dim.dtype is Dtype.SERIES_1D and arr.shape[1] != dim.series_length:
                    raise MetadataError(
                        f"column {dim.name!r}: series length mismatch with metadata"
                    )
                arr = arr.copy()
                arr.flags.writeable = False
                col = arr
                counts.add(arr.shape[0])
            frozen[dim.name] = col
        if len(counts) > 1:
            raise MetadataError("all columns must have the same run count")
        self._dimensions = tuple(dimensions)
        self._by_name = {d.name: d for d in self._dimensions}
        self._columns = frozen
        self._run_count = counts.pop() if counts else 0
        self._table_id: str | None = None

    @property
    def dimensions(self) -> tuple[Dimension, ...]:
        return self._dimensions

    @property
    def run_count(self) -> int:
        return self._run_count

    @property
    def table_id(self) -> str:
        """Content-derived id, stable across processes for identical data."""
        if self._table_id is None:
            digest = hashlib.sha256(serialize(self).encode("utf-8")).hexdigest()
            self._table_id = "t" + digest[:12]
        return self._table_id

    def dimension(self, name: str) -> Dimension:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownDimension(name) from None

    def has_dimension(self, name: str) -> bool:
        return name in self._by_name

    def values(self, name: str):
        """Column data: ndarray for numeric dtypes, tuple of str for images."""
        self.dimension(name)
        return self._columns[name]

    def run(self, run_id: int) -> Run:
        if not 0 <= run_id < self._run_count:
            raise UnknownRun(run_id)
        vals = {}
        for dim in self._dimensions:
            col = self._columns[dim.name]
            if dim.dtype is Dtype.QUANTITATIVE:
                vals[dim.name] = float(col[run_id])
            elif dim.dtype is Dtype.SERIES_1D:
                vals[dim.name] = tuple(float(v) for v in col[run_id])
            else:
                vals[dim.name] = col[run_id]
        return Run(id=run_id, values=vals)

    def with_dimensions(self, dimensions: Sequence[Dimension]) -> "RunTable":
        """Same data, new metadata. Names and dtypes must be unchanged."""
        if tuple(d.name for d in dimensions) != tuple(d.name for d in self._dimensions):
            raise MetadataError("dimension names/order must be preserved")
        for old, new in zip(self._dimensions, dimensions):
            if old.dtype is not new.dtype or old.series_length != new.series_length:
                raise MetadataError(f"dtype of {old.name!r} cannot change")
        clone = RunTable.__new__(RunTable)
        clone._dimensions = tuple(dimensions)
        clone._by_name = {d.name: d for d in clone._dimensions}
        clone._columns = self._columns
        clone._run_count = self._run_count
        clone._table_id = self._table_id
        return clone


class UnknownRun(EngineError):
    def __init__(self, run_id):
        super().__init__(f"unknown run id: {run_id!r}")
        self.run_id = run_id


def _parse_float(cell: str) -> float:
    # U+2212 (math minus) shows up in exported data; treat it as '-'.
    value = float(cell.strip().replace("−", "-"))
    if not math.isfinite(value):
        raise ValueError("not finite")
    return value


def _parse_series(cell: str) -> list[float]:
    body = cell.strip()
    if not (body.startswith("[") and body.endswith("]")):
        raise ValueError("not a bracketed list")
    inner = body[1:-1].strip()
    if not inner:
        raise ValueError("empty list")
    return [_parse_float(part) for part in inner.split(",")]


def _is_image_ref(cell: str) -> bool:
    text = cell.strip()
    if not text:
        return False
    path = text
    if text.lower().startswith(("http://", "https://")):
        path = urlsplit(text).path
    return path.lower().endswith(IMAGE_EXTENSIONS)


def _cell_dtypes(cell: str) -> set[Dtype]:
    kinds: set[Dtype] = set()
    try:
        _parse_series(cell)
        kinds.add(Dtype.SERIES_1D)
    except ValueError:
        pass
    if _is_image_ref(cell):
        kinds.add(Dtype.IMAGE_REF_2D)
    try:
        _parse_float(cell)
        kinds.add(Dtype.QUANTITATIVE)
    except ValueError:
        pass
    return kinds


_DTYPE_PRECEDENCE = (Dtype.SERIES_1D, Dtype.IMAGE_REF_2D, Dtype.QUANTITATIVE)


def infer_dtype(cells: Iterable[str], column: str = "<anonymous>") -> tuple[Dtype, int | None]:
    """Classify a column from its raw cells.

    Returns (dtype, series_length). Empty cells are ignored for inference.
    Precedence when a column admits several readings: Series1D, then
    ImageRef2D, then Quantitative. Raises AllEmpty when no cell is non-empty
    and MixedTypes when the non-empty cells share no admissible dtype.
    """
    shared: set[Dtype] | None = None
    first_series: str | None = None
    seen = False
    for cell in cells:
        if cell.strip() == "":
            continue
        seen = True
        kinds = _cell_dtypes(cell)
        if not kinds:
            raise MixedTypes(column)
        shared = kinds if shared is None else shared & kinds
        if not shared:
            raise MixedTypes(column)
        if first_series is None and Dtype.SERIES_1D in kinds:
            first_series = cell
    if not seen:
        raise AllEmpty(column)
    assert shared
    for dtype in _DTYPE_PRECEDENCE:
        if dtype in shared:
            if dtype is Dtype.SERIES_1D:
                return dtype, len(_parse_series(first_series))
            return dtype, None
    raise MixedTypes(column)  # unreachable


def load_csv(text: str, options: IngestOptions | None = None) -> RunTable:
    """Parse RFC-4180 CSV text (comma-separated, UTF-8) into a RunTable.

    The first row is the header. Dtypes are inferred per column unless
    options.dtypes forces them. Empty Quantitative/Series1D cells are a hard
    error; empty ImageRef2D cells are kept as "" (renderers substitute a
    placeholder). Row indices in errors are 0-based data-row indices, which
    equal the resulting run ids.
    """
    opts = options or IngestOptions()
    if text.strip() == "":
        raise EmptyInput("input contains no CSV data")
    rows = list(csv.reader(io.StringIO(text)))
    rows = [r for i, r in enumerate(rows) if r or i == 0]
    if not rows:
        raise EmptyInput("input contains no CSV data")
    header = [h.strip() for h in rows[0]]
    seen: set[str] = set()
    for name in header:
        if name in seen:
            raise DuplicateHeader(name)
        seen.add(name)
    data = rows[1:]
    if not data:
        raise EmptyInput("input has a header but no data rows")
    for i, row in enumerate(data):
        if len(row) != len(header):
            raise RowArityMismatch(i, len(header), len(row))
    if len(data) > opts.max_runs:
        raise RunLimitExceeded(len(data), opts.max_runs)

    dimensions: list[Dimension] = []
    columns: dict[str, object] = {}
    for c, name in enumerate(header):
        raw = [row[c] for row in data]
        if opts.dtypes and name in opts.dtypes:
            dtype = Dtype(opts.dtypes[name])
            length = None
            if dtype is Dtype.SERIES_1D:
                for r, cell in enumerate(raw):
                    if cell.strip():
                        try:
                            length = len(_parse_series(cell))
                        except ValueError:
                            raise TypeConflict(name, r, "expected a series cell") from None
                        break
                if length is None:
                    raise AllEmpty(name)
        else:
            dtype, length = infer_dtype(raw, column=name)

        if dtype is Dtype.QUANTITATIVE:
            out = np.empty(len(raw), dtype=np.float64)
            for r, cell in enumerate(raw):
                if cell.strip() == "":
                    raise TypeConflict(name, r, "empty numeric cell")
                try:
                    out[r] = _parse_float(cell)
                except ValueError:
                    raise TypeConflict(name, r, "expected a finite number") from None
            columns[name] = out
        elif dtype is Dtype.SERIES_1D:
            mat = np.empty((len(raw), length), dtype=np.float64)
            for r, cell in enumerate(raw):
                if cell.strip() == "":
                    raise TypeConflict(name, r, "empty series cell")
                try:
                    vals = _parse_series(cell)
                except ValueError:
                    raise TypeConflict(name, r, "expected a bracketed number list") from None
                if len(vals) != length:
                    raise SeriesLengthMismatch(name, r, length, len(vals))
                mat[r] = vals
            columns[name] = mat
        else:
            refs = []
            for r, cell in enumerate(raw):
                stripped = cell.strip()
                if stripped and not _is_image_ref(stripped):
                    raise TypeConflict(name, r, "expected an image path or URL")
                refs.append(stripped)
            columns[name] = tuple(refs)
        dimensions.append(Dimension(name=name, dtype=dtype, series_length=length))
    return RunTable(dimensions, columns)


def _format_float(value: float) -> str:
    return repr(float(value))


def serialize(table: RunTable) -> str:
    """CSV text that load_csv reads back to an equal-valued table.

    Floats are written with repr so numeric values round-trip bit for bit;
    image refs round-trip string-equal. Role/sampling metadata is not part of
    the CSV (it travels in the sidecar).
    """
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow([d.name for d in table.dimensions])
    cols = [table.values(d.name) for d in table.dimensions]
    for r in range(table.run_count):
        row = []
        for dim, col in zip(table.dimensions, cols):
            if dim.dtype is Dtype.QUANTITATIVE:
                row.append(_format_float(col[r]))
            elif dim.dtype is Dtype.SERIES_1D:
                row.append("[" + ",".join(_format_float(v) for v in col[r]) + "]")
            else:
                row.append(col[r])
        writer.writerow(row)
    return out.getvalue()


def set_metadata(
    table: RunTable,
    name: str,
    role: Role | str | None = None,
    sampling: Sampling | str | None = None,
) -> RunTable:
    """Return a table with one dimension's role/sampling updated (None keeps)."""
    current = table.dimension(name)
    new = current
    if role is not None:
        new = replace(new, role=_coerce(Role, role))
    if sampling is not None:
        new = replace(new, sampling=_coerce(Sampling, sampling))
    dims = [new if d.name == name else d for d in table.dimensions]
    return table.with_dimensions(dims)


def _coerce(enum_cls, value):
    if isinstance(value, enum_cls):
        return value
    try:
        return enum_cls(value)
    except ValueError:
        raise MetadataError(f"invalid {enum_cls.__name__.lower()}: {value!r}") from None


def apply_sidecar(table: RunTable, sidecar: Mapping) -> RunTable:
    """Apply a metadata sidecar mapping.

    Shape: {"dimensions": {name: {"role": ..., "sampling": ...}},
    "default_sampling": ...}. Dimensions without an explicit sampling get the
    table-level default, which itself defaults to stochastic. Roles are only
    set where stated.
    """
    if not isinstance(sidecar, Mapping):
        raise MetadataError("sidecar must be a JSON object")
    entries = sidecar.get("dimensions", {})
    if not isinstance(entries, Mapping):
        raise MetadataError('sidecar "dimensions" must be an object')
    default_sampling = _coerce(Sampling, sidecar.get("default_sampling", Sampling.STOCHASTIC))
    for name in entries:
        table.dimension(name)  # raises UnknownDimension
    dims = []
    for dim in table.dimensions:
        entry = entries.get(dim.name, {})
        if not isinstance(entry, Mapping):
            raise MetadataError(f"sidecar entry for {dim.name!r} must be an object")
        role = _coerce(Role, entry["role"]) if "role" in entry else dim.role
        if "sampling" in entry:
            sampling = _coerce(Sampling, entry["sampling"])
        else:
            sampling = default_sampling
        dims.append(replace(dim, role=role, sampling=sampling))
    return table.with_dimensions(dims)


def load_sidecar_text(text: str) -> Mapping:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MetadataError(f"sidecar is not valid JSON: {exc}") from None
    if not isinstance(data, dict):
        raise MetadataError("sidecar must be a JSON object")
    return data
