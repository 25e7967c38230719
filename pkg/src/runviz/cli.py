"""Command line front end.

Verbs:
    ingest            load a CSV (+ optional metadata sidecar) and print a dimension summary
    recommend         print task recommendations for an encoding
    layout            print the small-multiple grid for one option
    export-dashboard  validate a dashboard document and re-emit it normalized
    serve             run the HTTP service
    fixture           write a generated example dataset to disk

Payloads go to stdout as JSON; diagnostics go to stderr. Exit codes: 0 on
success, 2 for bad command lines or unreadable files, 3 when the engine
rejects the input.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import dashboard as dash, data_model, fixtures, layout as smd, visrec
from .data_model import Dtype, IngestOptions, Role, RunTable, Sampling
from .design_space import EncodingState, VisOptionId
from .errors import EngineError
from .service import create_app, env_max_runs, env_port

USAGE_ERROR = 2
ENGINE_ERROR = 3


def _emit(payload) -> None:
    sys.stdout.write(json.dumps(payload, indent=2) + "\n")


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise SystemExit(_usage_fail(f"cannot read {path}: {exc.strerror or exc}"))


def _usage_fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return USAGE_ERROR


def _load_table(csv_path: str, meta_path: str | None, max_runs: int) -> RunTable:
    table = data_model.load_csv(_read_text(csv_path), IngestOptions(max_runs=max_runs))
    if meta_path is not None:
        table = data_model.apply_sidecar(
            table, data_model.load_sidecar_text(_read_text(meta_path))
        )
    return table


def _dim_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--s1", default="", help="comma-separated first spatial field")
    parser.add_argument("--s2", default="", help="comma-separated second spatial field")
    parser.add_argument("--color", default="", help="comma-separated color field")
    parser.add_argument("--opacity", default="", help="comma-separated opacity field")


def _split(raw: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in raw.split(",") if part.strip())


def _parse_objects(raw_items: list[str]) -> list[tuple[str, Dtype]]:
    """Object dims come as name, name:series, or name:image."""
    out = []
    for raw in raw_items:
        name, _, kind = raw.partition(":")
        if not name:
            raise SystemExit(_usage_fail(f"bad --object value: {raw!r}"))
        if kind in ("", "series"):
            out.append((name, Dtype.SERIES_1D))
        elif kind == "image":
            out.append((name, Dtype.IMAGE_REF_2D))
        else:
            raise SystemExit(_usage_fail(f"bad --object kind: {kind!r} (use series or image)"))
    return out


def _stub_table(enc_dims: list[str], objects: list[tuple[str, Dtype]]) -> RunTable:
    """A two-run table so encodings can be validated without a dataset.

    Quantitative placeholders for every channel dim; object dims get a short
    series or an image reference per the annotation.
    """
    names = list(enc_dims) + [name for name, _ in objects]
    kinds = {name: kind for name, kind in objects}
    header = ",".join(names)
    rows = []
    for i in range(2):
        cells = []
        for name in names:
            kind = kinds.get(name)
            if kind is Dtype.SERIES_1D:
                cells.append(f'"[{i}.0, {i + 1}.0]"')
            elif kind is Dtype.IMAGE_REF_2D:
                cells.append(f"stub{i}.png")
            else:
                cells.append(f"{float(i)}")
        rows.append(",".join(cells))
    table = data_model.load_csv("\n".join([header] + rows))
    for name in enc_dims:
        table = data_model.set_metadata(
            table, name, role=Role.INPUT_CONTROL, sampling=Sampling.REGULAR
        )
    return table


def _encoding_from_args(args) -> EncodingState:
    objects = _parse_objects(args.object or []) if hasattr(args, "object") else []
    return EncodingState(
        s1=_split(args.s1),
        s2=_split(args.s2),
        color=_split(args.color),
        opacity=_split(args.opacity),
        object=tuple(name for name, _ in objects),
    )


def cmd_ingest(args) -> int:
    table = _load_table(args.csv, args.meta, args.max_runs)
    _emit(
        {
            "table_id": table.table_id,
            "run_count": table.run_count,
            "dimensions": [d.to_json_dict() for d in table.dimensions],
        }
    )
    return 0


def cmd_recommend(args) -> int:
    objects = _parse_objects(args.object or [])
    enc = EncodingState(
        s1=_split(args.s1),
        s2=_split(args.s2),
        color=_split(args.color),
        opacity=_split(args.opacity),
        object=tuple(name for name, _ in objects),
    )
    if args.csv is not None:
        table = _load_table(args.csv, args.meta, args.max_runs)
    else:
        enc_dims = [d for f in (enc.s1, enc.s2, enc.color, enc.opacity) for d in f]
        table = _stub_table(enc_dims, objects)
    tasks = _split(args.tasks)
    rec = visrec.recommend(tasks, enc, table)
    _emit(rec.to_json_dict())
    return 0


def cmd_layout(args) -> int:
    try:
        option = VisOptionId(args.option)
    except ValueError:
        return _usage_fail(
            f"unknown option {args.option!r}; expected one of "
            + ", ".join(o.value for o in VisOptionId)
        )
    enc = _encoding_from_args(args)
    grid = smd.layout_smd(option, enc)
    _emit(grid.to_json_dict())
    return 0


def cmd_export_dashboard(args) -> int:
    doc_data = json.loads(_read_text(args.doc))
    table = None
    if args.csv is not None:
        table = _load_table(args.csv, args.meta, args.max_runs)
    doc = dash.doc_from_json_dict(doc_data, table)
    _emit(doc.to_json_dict())
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    app = create_app(max_runs=args.max_runs, ui_dir=args.ui)
    print(f"serving on {args.host}:{args.port}", file=sys.stderr)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def cmd_fixture(args) -> int:
    csv_text, sidecar = fixtures.make_fixture(
        args.kind, runs=args.runs, seed=args.seed, dims=args.dims
    )
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / f"{args.kind}.csv"
    meta_path = out_dir / f"{args.kind}.meta.json"
    csv_path.write_text(csv_text, encoding="utf-8")
    meta_path.write_text(json.dumps(sidecar, indent=2) + "\n", encoding="utf-8")
    print(f"wrote {csv_path} and {meta_path}", file=sys.stderr)
    _emit({"csv": str(csv_path), "meta": str(meta_path)})
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="runviz", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("ingest", help="load a CSV and print its dimension summary")
    p.add_argument("csv")
    p.add_argument("--meta", help="metadata sidecar JSON path")
    p.add_argument("--max-runs", type=int, default=data_model.MAX_RUNS_DEFAULT)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("recommend", help="print task recommendations for an encoding")
    p.add_argument("csv", nargs="?", help="optional dataset; omitted means a stub table")
    p.add_argument("--tasks", required=True, help="comma-separated task names")
    _dim_args(p)
    p.add_argument(
        "--object",
        action="append",
        help="object dim as name[:series|:image]; repeatable",
    )
    p.add_argument("--meta", help="metadata sidecar JSON path")
    p.add_argument("--max-runs", type=int, default=data_model.MAX_RUNS_DEFAULT)
    p.set_defaults(func=cmd_recommend)

    p = sub.add_parser("layout", help="print the small-multiple grid for one option")
    p.add_argument("--option", required=True)
    _dim_args(p)
    p.set_defaults(func=cmd_layout)

    p = sub.add_parser("export-dashboard", help="validate and re-emit a dashboard document")
    p.add_argument("doc", help="dashboard document JSON path")
    p.add_argument("csv", nargs="?", help="optional dataset to validate cells against")
    p.add_argument("--meta", help="metadata sidecar JSON path")
    p.add_argument("--max-runs", type=int, default=data_model.MAX_RUNS_DEFAULT)
    p.set_defaults(func=cmd_export_dashboard)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=env_port())
    p.add_argument("--max-runs", type=int, default=env_max_runs())
    p.add_argument("--ui", help="directory of static UI files to mount at /ui")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("fixture", help="write a generated example dataset")
    p.add_argument("--kind", required=True, choices=fixtures.FIXTURE_KINDS)
    p.add_argument("--runs", type=int, default=None)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--dims", type=int, default=20)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_fixture)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return USAGE_ERROR if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else USAGE_ERROR
    except json.JSONDecodeError as exc:
        return _usage_fail(f"bad JSON: {exc}")
    except EngineError as exc:
        print(f"error [{exc.code}]: {exc}", file=sys.stderr)
        return ENGINE_ERROR


if __name__ == "__main__":
    raise SystemExit(main())
