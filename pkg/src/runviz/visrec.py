"""Task-oriented view recommendation.

Six analysis tasks drive the recommendations. Each carries a one-line
description (shown as a tooltip), a strategy label, and the approach it takes
in MDMV charts and on 1D/2D objects:

    task          strategy         MDMV approach            objects
    optimization  Overview         spatial expressivity     line graph / grid
    fitting       Affiliation      overview + color         juxtaposition
    uncertainty   Attenuation      overview + brightness    boxplots
    outliers      Separation       point marks              (line graph)
    sensitivity   Con-/Divergence  line marks               cum. hist / superpos.
    partitioning  Summarization    area marks               grid, filtered hidden

The first three are channel-based (they frame encoding fields and the charts
that give a good overview), the last three mark-based (they frame chart
options whose mark shape suits the task).

recommend() runs the tasks as a cascade in the fixed order above; frames only
accumulate, later tasks never retract earlier ones. Optimization is always
part of a non-empty task set. The spatial-expressivity lookup table maps a
spatial field's dimension count and provenance (regularly sampled control
inputs vs stochastically sampled inputs or outputs) to the chart options that
stay readable at that width; parenthesized-in-the-docs entries are kept as
"marginal" recommendations.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .data_model import Dtype, Role, RunTable, Sampling
from .design_space import (
    EncodingState,
    MarkClass,
    OPTIONS,
    VisOptionId,
    mdmv_applicable,
    object_dims_by_kind,
    validate_encoding,
)
from .errors import EngineError

MAX_TASKS = 4


class TaskId(str, Enum):
    OPTIMIZATION = "optimization"
    FITTING = "fitting"
    UNCERTAINTY = "uncertainty"
    OUTLIERS = "outliers"
    SENSITIVITY = "sensitivity"
    PARTITIONING = "partitioning"


TASK_ORDER: tuple[TaskId, ...] = (
    TaskId.OPTIMIZATION,
    TaskId.FITTING,
    TaskId.UNCERTAINTY,
    TaskId.OUTLIERS,
    TaskId.SENSITIVITY,
    TaskId.PARTITIONING,
)


@dataclass(frozen=True)
class Task:
    id: TaskId
    description: str
    strategy_label: str
    mdmv_group: str      # "Channel-based" | "Mark-based"
    mdmv_approach: str
    complex_label: str


TASKS: dict[TaskId, Task] = {
    t.id: t
    for t in (
        Task(
            TaskId.OPTIMIZATION,
            "Find the best parameter setting",
            "Overview",
            "Channel-based",
            "Spatial expressivity",
            "1D-Line, 2D-Grid",
        ),
        Task(
            TaskId.FITTING,
            "Find where actual model data occurs",
            "Affiliation",
            "Channel-based",
            "Overview + Color",
            "2D-Jux",
        ),
        Task(
            TaskId.UNCERTAINTY,
            "Determine the reliability of the output",
            "Attenuation",
            "Channel-based",
            "Overview + Brightness",
            "1D-Box",
        ),
        Task(
            TaskId.OUTLIERS,
            "Find odd or special outputs",
            "Separation",
            "Mark-based",
            "Point-based (0D-mark)",
            "(1D-Line)",
        ),
        Task(
            TaskId.SENSITIVITY,
            "Identify input regions with high or low impact on the output",
            "Con-/Divergence",
            "Mark-based",
            "Line-based (1D-mark)",
            "1D-Hist, 2D-Sup",
        ),
        Task(
            TaskId.PARTITIONING,
            "Identify different types of model behavior",
            "Summarization",
            "Mark-based",
            "Area-based (2D-mark)",
            "2D-Grid (-)",
        ),
    )
}


class ExpressivityKind(str, Enum):
    REGULAR_INPUTS = "regular_inputs"
    STOCHASTIC_OR_OUTPUTS = "stochastic_or_outputs"


@dataclass(frozen=True)
class ExpressivityEntry:
    option: VisOptionId
    marginal: bool = False


def _entries(*items) -> tuple[ExpressivityEntry, ...]:
    out = []
    for item in items:
        if isinstance(item, tuple):
            out.append(ExpressivityEntry(item[0], item[1]))
        else:
            out.append(ExpressivityEntry(item))
    return tuple(out)


_REG = ExpressivityKind.REGULAR_INPUTS
_STO = ExpressivityKind.STOCHASTIC_OR_OUTPUTS
_V = VisOptionId

# Readable chart options per spatial-field width. Buckets 7-9 collapse, as do
# 10 and above. Marginal entries are weaker fallbacks, not full
# recommendations. At width 4 of stochastic/output dims both matrix variants
# stay admissible.
EXPRESSIVITY: dict[str, dict[ExpressivityKind, tuple[ExpressivityEntry, ...]]] = {
    "1": {
        _REG: _entries((_V.PSC, True), (_V.HIST, True)),
        _STO: _entries((_V.PSC, True)),
    },
    "2": {_REG: _entries(_V.WDCP, _V.HIST), _STO: _entries(_V.SP)},
    "3": {_REG: _entries(_V.SPLOM, _V.WDCP, _V.HIST), _STO: _entries(_V.SPLOM)},
    "4": {_REG: _entries(_V.PC, _V.WDCP, _V.HIST), _STO: _entries(_V.SPLOM, _V.RSPLOM)},
    "5": {_REG: _entries(_V.PC, _V.WDCP, _V.HIST), _STO: _entries(_V.RSPLOM)},
    "6": {_REG: _entries(_V.PC, _V.HIST), _STO: _entries(_V.RSPLOM)},
    "7to9": {_REG: _entries(_V.PC), _STO: _entries(_V.PC)},
    "10plus": {_REG: _entries((_V.PC, True)), _STO: _entries(_V.PSC)},
}

EXPRESSIVITY_BUCKETS = ("1", "2", "3", "4", "5", "6", "7to9", "10plus")


class TooManyTasks(EngineError):
    def __init__(self, count: int):
        super().__init__(
            f"{count} tasks requested; at most {MAX_TASKS} including optimization"
        )


class UnknownTask(EngineError):
    def __init__(self, value):
        super().__init__(f"unknown task: {value!r}")


class NotRecommended(EngineError):
    def __init__(self, task, option):
        super().__init__(
            f"option {getattr(option, 'value', option)} is not framed for task "
            f"{getattr(task, 'value', task)}"
        )


def dim_bucket(dim_count: int) -> str:
    if dim_count < 1:
        raise ValueError("dim_count must be >= 1")
    if dim_count <= 6:
        return str(dim_count)
    if dim_count <= 9:
        return "7to9"
    return "10plus"


def spatial_expressivity(
    dim_count: int, kind: ExpressivityKind
) -> list[ExpressivityEntry]:
    """Chart options readable for a spatial field of dim_count dimensions."""
    return list(EXPRESSIVITY[dim_bucket(dim_count)][ExpressivityKind(kind)])


_INPUT_ROLES = (Role.INPUT_CONTROL, Role.INPUT_ENVIRONMENTAL)


def field_kind(table: RunTable, dims: Sequence[str]) -> ExpressivityKind:
    """Which expressivity column a spatial field falls under.

    Regular-inputs treatment requires every dim to be an input sampled on a
    regular grid; any output, unassigned, stochastic, or unknown-sampled dim
    flips the whole field to the stochastic/outputs column.
    """
    for name in dims:
        dim = table.dimension(name)
        if dim.role not in _INPUT_ROLES or dim.sampling is not Sampling.REGULAR:
            return ExpressivityKind.STOCHASTIC_OR_OUTPUTS
    return ExpressivityKind.REGULAR_INPUTS


class FrameKind(str, Enum):
    VIS_OPTION = "vis_option"
    CHANNEL_FIELD = "channel_field"


@dataclass(frozen=True)
class Frame:
    """One task-colored highlight: either a chart option in the overview or
    an encoding field in the selection panel (with role hints for what to
    drop there)."""

    task: TaskId
    kind: FrameKind
    target: str
    marginal: bool = False
    hint_roles: tuple[Role, ...] = ()
    variant: str | None = None

    def to_json_dict(self) -> dict:
        d = {
            "task": self.task.value,
            "target_kind": self.kind.value,
            "target": self.target,
            "marginal": self.marginal,
        }
        if self.hint_roles:
            d["hint_roles"] = [r.value for r in self.hint_roles]
        if self.variant:
            d["variant"] = self.variant
        return d


@dataclass(frozen=True)
class GuidanceBlock:
    task: Task
    options: tuple[str, ...]
    explanation: str
    hints: tuple[str, ...]

    def to_json_dict(self) -> dict:
        return {
            "task": self.task.id.value,
            "description": self.task.description,
            "strategy": self.task.strategy_label,
            "group": self.task.mdmv_group,
            "mdmv": self.task.mdmv_approach,
            "complex": self.task.complex_label,
            "options": list(self.options),
            "explanation": self.explanation,
            "hints": list(self.hints),
        }


def _load_texts() -> Mapping:
    with resources.files("runviz.resources").joinpath("explanations.json").open(
        "r", encoding="utf-8"
    ) as fh:
        return json.load(fh)


_TEXTS = _load_texts()


@dataclass(frozen=True)
class RecommendationSet:
    """Outcome of one recommend() call: ordered tasks, accumulated frames,
    and one guidance block per task. Holds the encoding it was computed for
    so explanations can name concrete dimensions."""

    tasks: tuple[Task, ...]
    frames: tuple[Frame, ...]
    guidance: tuple[GuidanceBlock, ...]
    encoding: EncodingState

    def frames_for(self, task: TaskId) -> list[Frame]:
        return [f for f in self.frames if f.task is task]

    def explain(self, task: TaskId | str, option: VisOptionId | str) -> str:
        """Why this option serves this task, or NotRecommended if it is not
        framed for it in this set."""
        task = _coerce_task(task)
        option = option if isinstance(option, VisOptionId) else _coerce_option(option)
        framed = any(
            f.kind is FrameKind.VIS_OPTION and f.target == option.value
            for f in self.frames_for(task)
        )
        template = _TEXTS["explain"].get(task.value, {}).get(option.value)
        if not framed or template is None:
            raise NotRecommended(task, option)
        return template.format(**_text_context(self.encoding))

    def to_json_dict(self) -> dict:
        return {
            "tasks": [t.id.value for t in self.tasks],
            "frames": [f.to_json_dict() for f in self.frames],
            "guidance": [g.to_json_dict() for g in self.guidance],
        }


def _coerce_task(value) -> TaskId:
    if isinstance(value, TaskId):
        return value
    try:
        return TaskId(value)
    except ValueError:
        raise UnknownTask(value) from None


def _coerce_option(value) -> VisOptionId:
    try:
        return VisOptionId(value)
    except ValueError:
        raise UnknownTask(value) from None


def _text_context(enc: EncodingState) -> dict:
    spatial = enc.s1 + enc.s2
    return {
        "dims": ", ".join(spatial) if spatial else "the spatial dimensions",
        "object": ", ".join(enc.object) if enc.object else "the encoded objects",
    }


def _vis_frame(task: TaskId, option: VisOptionId, marginal=False, variant=None) -> Frame:
    return Frame(task, FrameKind.VIS_OPTION, option.value, marginal=marginal, variant=variant)


def _field_frame(task: TaskId, fname: str, hints: tuple[Role, ...]) -> Frame:
    return Frame(task, FrameKind.CHANNEL_FIELD, fname, hint_roles=hints)


def _optimization_frames(enc: EncodingState, table: RunTable) -> list[Frame]:
    t = TaskId.OPTIMIZATION
    frames = [
        _field_frame(t, "s1", _INPUT_ROLES),
        _field_frame(t, "s2", (Role.OUTPUT_DIRECT, Role.OUTPUT_DERIVED)),
    ]
    for dims in (enc.s1, enc.s2):
        if not dims:
            continue
        for entry in spatial_expressivity(len(dims), field_kind(table, dims)):
            frames.append(_vis_frame(t, entry.option, marginal=entry.marginal))
    objects = object_dims_by_kind(enc, table)
    if Dtype.SERIES_1D in objects:
        frames.append(_vis_frame(t, VisOptionId.LINE1D))
    if Dtype.IMAGE_REF_2D in objects:
        frames.append(_vis_frame(t, VisOptionId.GRID2D))
    return frames


def _fitting_frames(enc: EncodingState, table: RunTable) -> list[Frame]:
    t = TaskId.FITTING
    frames = [_field_frame(t, "color", (Role.OUTPUT_DERIVED,))]
    if Dtype.IMAGE_REF_2D in object_dims_by_kind(enc, table):
        frames.append(_vis_frame(t, VisOptionId.JUX2D))
    return frames


def _uncertainty_frames(enc: EncodingState, table: RunTable) -> list[Frame]:
    t = TaskId.UNCERTAINTY
    channel = "color" if not enc.color else "opacity"
    frames = [_field_frame(t, channel, (Role.UNCERTAINTY,))]
    if Dtype.SERIES_1D in object_dims_by_kind(enc, table):
        frames.append(_vis_frame(t, VisOptionId.BOX1D))
    return frames


def _outliers_frames(enc: EncodingState, table: RunTable) -> list[Frame]:
    t = TaskId.OUTLIERS
    frames: list[Frame] = []
    applicable = {o.id for o in mdmv_applicable(enc)}
    point_ids = [
        o.id
        for o in mdmv_applicable(enc)
        if OPTIONS[o.id].mark_class is MarkClass.POINT_0D
    ]
    if enc.total_spatial and enc.total_spatial <= 2 and VisOptionId.SP in applicable:
        frames.append(_vis_frame(t, VisOptionId.SP))
    elif VisOptionId.SPLOM in applicable:
        frames.append(_vis_frame(t, VisOptionId.SPLOM))
    else:
        frames.extend(_vis_frame(t, oid) for oid in point_ids)
    if Dtype.SERIES_1D in object_dims_by_kind(enc, table):
        frames.append(_vis_frame(t, VisOptionId.LINE1D, marginal=True))
    return frames


def _sensitivity_frames(enc: EncodingState, table: RunTable) -> list[Frame]:
    t = TaskId.SENSITIVITY
    frames: list[Frame] = []
    applicable = {o.id for o in mdmv_applicable(enc)}
    for oid in (VisOptionId.WDCP, VisOptionId.PC):
        if oid in applicable:
            frames.append(_vis_frame(t, oid))
    objects = object_dims_by_kind(enc, table)
    if Dtype.SERIES_1D in objects:
        frames.append(_vis_frame(t, VisOptionId.CHIST1D))
    if Dtype.IMAGE_REF_2D in objects:
        frames.append(_vis_frame(t, VisOptionId.SUP2D))
    return frames


def _partitioning_frames(enc: EncodingState, table: RunTable) -> list[Frame]:
    t = TaskId.PARTITIONING
    frames: list[Frame] = []
    if any(o.id is VisOptionId.HIST for o in mdmv_applicable(enc)):
        frames.append(_vis_frame(t, VisOptionId.HIST))
    if Dtype.IMAGE_REF_2D in object_dims_by_kind(enc, table):
        frames.append(_vis_frame(t, VisOptionId.GRID2D, variant="hide_filtered"))
    return frames


_CASCADE = {
    TaskId.OPTIMIZATION: _optimization_frames,
    TaskId.FITTING: _fitting_frames,
    TaskId.UNCERTAINTY: _uncertainty_frames,
    TaskId.OUTLIERS: _outliers_frames,
    TaskId.SENSITIVITY: _sensitivity_frames,
    TaskId.PARTITIONING: _partitioning_frames,
}

# Mark-based tasks may only frame MDMV options of their mark class.
_MARK_CONSTRAINT = {
    TaskId.OUTLIERS: MarkClass.POINT_0D,
    TaskId.SENSITIVITY: MarkClass.LINE_1D,
    TaskId.PARTITIONING: MarkClass.AREA_2D,
}


def _dedupe(frames: Iterable[Frame]) -> list[Frame]:
    # Within a task, the same target may be framed via both spatial fields;
    # keep one frame, and let a solid recommendation override a marginal one.
    out: list[Frame] = []
    index: dict[tuple, int] = {}
    for frame in frames:
        key = (frame.task, frame.kind, frame.target, frame.variant)
        if key in index:
            i = index[key]
            if out[i].marginal and not frame.marginal:
                out[i] = frame
            continue
        index[key] = len(out)
        out.append(frame)
    return out


def recommend(
    tasks: Iterable[TaskId | str], enc: EncodingState, table: RunTable
) -> RecommendationSet:
    """Run the task cascade over the current encoding.

    An empty task selection yields an empty set. Otherwise optimization is
    always included, tasks run in the fixed cascade order, and more than
    MAX_TASKS tasks (after auto-inclusion) raise TooManyTasks.
    """
    validate_encoding(enc, table)
    requested = {_coerce_task(t) for t in tasks}
    if not requested:
        return RecommendationSet((), (), (), enc)
    requested.add(TaskId.OPTIMIZATION)
    if len(requested) > MAX_TASKS:
        raise TooManyTasks(len(requested))
    ordered = tuple(t for t in TASK_ORDER if t in requested)

    frames: list[Frame] = []
    for task in ordered:
        frames.extend(_CASCADE[task](enc, table))
    frames = _dedupe(frames)

    for frame in frames:
        constraint = _MARK_CONSTRAINT.get(frame.task)
        if constraint and frame.kind is FrameKind.VIS_OPTION:
            opt = OPTIONS[VisOptionId(frame.target)]
            assert opt.mark_class in (constraint, MarkClass.OBJECT), frame

    ctx_guidance = []
    for task in ordered:
        block_frames = [f for f in frames if f.task is task and f.kind is FrameKind.VIS_OPTION]
        texts = _TEXTS["guidance"][task.value]
        ctx_guidance.append(
            GuidanceBlock(
                task=TASKS[task],
                options=tuple(f.target for f in block_frames),
                explanation=texts["explanation"].format(**_text_context(enc)),
                hints=tuple(texts["hints"]),
            )
        )
    return RecommendationSet(
        tasks=tuple(TASKS[t] for t in ordered),
        frames=tuple(frames),
        guidance=tuple(ctx_guidance),
        encoding=enc,
    )
