"""Engine for visual analysis of simulation run tables.

Ingests CSV run tables, models the chart design space over an encoding
state, recommends visualizations per analysis task, lays out small-multiple
grids, and drives crossfilter analytics and dashboard documents. The HTTP
service and CLI live in :mod:`runviz.service` and :mod:`runviz.cli`.
"""

from .analytics import (
    FilterResult,
    FilterState,
    apply_filters,
    boxplot_series,
    cumulative_curve,
    density_contours,
    density_grid,
    histogram,
    select_run,
)
from .dashboard import (
    DashboardDoc,
    Mode,
    Rect,
    add_external_view,
    add_view,
    doc_from_json_dict,
    edit_attributes,
    emit_specs,
    move_resize,
    set_filters,
    set_mode,
    vis_spec,
)
from .data_model import (
    Dimension,
    Dtype,
    IngestOptions,
    Role,
    RunTable,
    Sampling,
    apply_sidecar,
    load_csv,
    serialize,
    set_metadata,
)
from .design_space import (
    EncodingState,
    VisOption,
    VisOptionId,
    applicable_options,
    mdmv_applicable,
    validate_encoding,
)
from .errors import EngineError
from .layout import CellSpec, SmdLayout, detail_for, layout_smd, single_chart_cell
from .visrec import RecommendationSet, Task, TaskId, recommend, spatial_expressivity

__version__ = "0.1.0"

__all__ = [
    "CellSpec",
    "DashboardDoc",
    "Dimension",
    "Dtype",
    "EncodingState",
    "EngineError",
    "FilterResult",
    "FilterState",
    "IngestOptions",
    "Mode",
    "RecommendationSet",
    "Rect",
    "Role",
    "RunTable",
    "Sampling",
    "SmdLayout",
    "Task",
    "TaskId",
    "VisOption",
    "VisOptionId",
    "add_external_view",
    "add_view",
    "applicable_options",
    "apply_filters",
    "apply_sidecar",
    "boxplot_series",
    "cumulative_curve",
    "density_contours",
    "density_grid",
    "detail_for",
    "doc_from_json_dict",
    "edit_attributes",
    "emit_specs",
    "histogram",
    "layout_smd",
    "load_csv",
    "mdmv_applicable",
    "move_resize",
    "recommend",
    "select_run",
    "serialize",
    "set_filters",
    "set_metadata",
    "set_mode",
    "single_chart_cell",
    "spatial_expressivity",
    "validate_encoding",
    "vis_spec",
    "__version__",
]
