#!/usr/bin/env python3
"""Walk one analysis session end to end on a built-in fixture.

Loads the powder-like ensemble, encodes its inputs and outputs, asks for
recommendations, builds a two-view dashboard, then narrows the filters to
the best-fitting runs and prints how each input range reacts. Run it with
no arguments; pass --kind to try another fixture.
"""

import argparse
import json

import numpy as np

from runviz import (
    DashboardDoc,
    EncodingState,
    FilterState,
    VisOptionId,
    add_view,
    apply_filters,
    detail_for,
    emit_specs,
    layout_smd,
    recommend,
    set_filters,
    single_chart_cell,
)
from runviz.fixtures import load_fixture


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--kind", default="powder-like", help="fixture kind to load")
    parser.add_argument("--runs", type=int, default=50)
    args = parser.parse_args()

    table = load_fixture(args.kind, runs=args.runs)
    print(f"loaded {args.kind}: {table.run_count} runs, {len(table.dimensions)} dimensions")
    for dim in table.dimensions:
        print(f"  {dim.name:10s} {dim.dtype.value:14s} {dim.role.value}")

    quant = [d.name for d in table.dimensions if d.dtype.value == "quantitative"]
    enc = EncodingState(s1=tuple(quant[:3]), s2=tuple(quant[3:5]))
    print(f"\nencoding: s1={enc.s1} s2={enc.s2}")

    rec = recommend(("optimization", "sensitivity"), enc, table)
    print("recommended frames:")
    for frame in rec.frames:
        tag = " (marginal)" if frame.marginal else ""
        print(f"  [{frame.task.value}] {frame.kind.value} -> {frame.target}{tag}")
    for block in rec.guidance:
        print(f"guidance [{block.task.id.value}]: {block.explanation}")

    grid = layout_smd(VisOptionId.SP, enc)
    rows, cols = grid.shape
    print(f"\nscatterplot small multiples: {rows} x {cols} grid")

    doc = DashboardDoc()
    doc = add_view(doc, table, detail_for(grid, (1, 1)))
    doc = add_view(doc, table, single_chart_cell(VisOptionId.HIST, EncodingState(s1=(quant[0],))))
    print(f"dashboard views: {[v.view_id for v in doc.views]}")
    print(f"sliders: {[s.dimension for s in doc.sliders]}")

    objective = quant[-1]
    col = np.asarray(table.values(objective), dtype=float)
    cut = float(np.sort(col)[table.run_count // 5 - 1])
    doc = set_filters(doc, table, FilterState().with_range(objective, float(col.min()), cut))
    passing = apply_filters(table, doc.filter_state)
    print(f"\nkept the best 20% by {objective}: {passing.pass_count} runs")

    for name in quant[:-1]:
        full = np.asarray(table.values(name), dtype=float)
        kept = full[passing.pass_mask]
        ratio = (kept.max() - kept.min()) / (full.max() - full.min())
        print(f"  {name:10s} retained range ratio {ratio:.2f}")

    specs = emit_specs(doc, table)
    print(f"\nemitted {len(specs)} view payloads; first one:")
    print(json.dumps(specs[0]["spec"], indent=2)[:400])


if __name__ == "__main__":
    main()
