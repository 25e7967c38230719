"""Seeded demo tables: an edge-detection sweep, a powder-diffraction-like
ensemble, and a plain synthetic table.

All generators are deterministic for a given (kind, runs, seed, dims) tuple
and emit CSV text plus a metadata sidecar, so the CLI can write byte-identical
files and tests can rebuild identical tables through the real ingestion path.

The powder-like fixture is constructed so its analysis signature holds by
construction rather than by seed luck: exactly the best 20% of runs (by the
analytic chi2 objective) carry zoff1/zoff2 near the optimum while their
angl1/angl2 spread over the whole range, so filtering to good runs narrows
the zoff ranges sharply and leaves the angl ranges wide. Series peaks are
truncated Gaussians (exact zeros beyond four sigmas): the peak at position
196 varies per run, the peak at 291 is identical across runs, and the window
between them is exactly flat, which keeps the cumulative curves' vertical
order frozen there.
"""

from __future__ import annotations

import io
import csv
import math
from dataclasses import dataclass

import numpy as np

from .data_model import IngestOptions, RunTable, apply_sidecar, load_csv
from .errors import EngineError

FIXTURE_KINDS = ("edge", "powder-like", "synthetic")

POWDER_SERIES_LENGTH = 320
POWDER_VARYING_PEAK = 196
POWDER_STABLE_PEAK = 291


class UnknownFixture(EngineError):
    def __init__(self, kind):
        super().__init__(f"unknown fixture kind: {kind!r}, expected one of {FIXTURE_KINDS}")


def _fmt(value: float) -> str:
    return repr(float(value))


def _csv_text(header: list[str], rows: list[list[str]]) -> str:
    out = io.StringIO()
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return out.getvalue()


def _series_cell(values) -> str:
    return "[" + ",".join(_fmt(v) for v in values) + "]"


def edge_fixture(runs: int = 50, seed: int = 0) -> tuple[str, dict]:
    """Regular grid sweep of an edge-detection-style model.

    Three control inputs (low, high, sigma) sampled on a regular grid; two
    direct outputs (sep, wep); two derived chi-square distances with a known
    analytic optimum at (0.25, 0.75, 1.5); a 1D projection series; an image
    path per run. Fully deterministic: the seed is accepted for interface
    symmetry but unused.
    """
    del seed
    if runs < 1:
        raise UnknownFixture(f"runs must be >= 1, got {runs}")
    side = max(2, math.ceil(runs ** (1.0 / 3.0)))
    lows = np.linspace(0.05, 0.45, side)
    highs = np.linspace(0.5, 0.95, side)
    sigmas = np.linspace(0.5, 3.0, side)
    rows = []
    idx = 0
    for lo in lows:
        for hi in highs:
            for sg in sigmas:
                if idx >= runs:
                    break
                chi2_co = 4 * (lo - 0.25) ** 2 + 4 * (hi - 0.75) ** 2 + 0.5 * (sg - 1.5) ** 2
                chi2_tco = 1.25 * chi2_co + 0.01
                sep = 100.0 * math.exp(-chi2_co)
                wep = 100.0 * (1.0 - math.exp(-chi2_tco))
                center = 6.0 + 16.0 * lo + 8.0 * (hi - 0.5)
                width = 1.5 + sg
                tco = [
                    math.exp(-((p - center) ** 2) / (2 * width**2)) for p in range(24)
                ]
                rows.append(
                    [
                        _fmt(lo),
                        _fmt(hi),
                        _fmt(sg),
                        _fmt(sep),
                        _fmt(wep),
                        _fmt(chi2_co),
                        _fmt(chi2_tco),
                        _series_cell(tco),
                        f"img/run{idx:03d}.png",
                    ]
                )
                idx += 1
    header = ["low", "high", "sigma", "sep", "wep", "chi2_co", "chi2_tco", "tco", "co"]
    sidecar = {
        "dimensions": {
            "low": {"role": "input_control", "sampling": "regular"},
            "high": {"role": "input_control", "sampling": "regular"},
            "sigma": {"role": "input_control", "sampling": "regular"},
            "sep": {"role": "output_direct"},
            "wep": {"role": "output_direct"},
            "chi2_co": {"role": "output_derived"},
            "chi2_tco": {"role": "output_derived"},
        },
        "default_sampling": "stochastic",
    }
    return _csv_text(header, rows), sidecar


def _truncated_gaussian(length: int, center: float, sigma: float, amplitude: float) -> np.ndarray:
    pos = np.arange(length, dtype=np.float64)
    out = amplitude * np.exp(-((pos - center) ** 2) / (2 * sigma**2))
    out[np.abs(pos - center) > 4 * sigma] = 0.0
    return out


def powder_fixture(runs: int = 50, seed: int = 7) -> tuple[str, dict]:
    """Stochastic ensemble around a powder-pattern fit.

    Four control inputs: angl1/angl2 spread over [0,1] regardless of quality,
    zoff1/zoff2 near 0.5 exactly for the best-20% runs (by the analytic chi2
    = (zoff1-0.5)^2 + (zoff2-0.5)^2). One 1D pattern per run with a varying
    peak at position 196 and an invariant peak (amplitude 2.0) at 291.
    """
    if runs < 5:
        raise UnknownFixture(f"powder-like fixture needs at least 5 runs, got {runs}")
    rng = np.random.default_rng(seed)
    good = max(1, runs // 5)
    rest = runs - good

    good_zoff = rng.uniform(0.42, 0.58, size=(good, 2))
    # Spread the good runs' angles across nearly the full range on purpose.
    spread = np.linspace(0.02, 0.98, good)
    good_angl1 = rng.permutation(spread) + rng.uniform(-0.01, 0.01, good)
    good_angl2 = rng.permutation(spread) + rng.uniform(-0.01, 0.01, good)
    good_angl1 = np.clip(good_angl1, 0.0, 1.0)
    good_angl2 = np.clip(good_angl2, 0.0, 1.0)

    rest_zoff = np.empty((0, 2))
    while rest_zoff.shape[0] < rest:
        batch = rng.uniform(0.0, 1.0, size=(rest * 2, 2))
        outside = np.abs(batch - 0.5).max(axis=1) > 0.15
        rest_zoff = np.vstack([rest_zoff, batch[outside]])
    rest_zoff = rest_zoff[:rest]
    rest_angl = rng.uniform(0.0, 1.0, size=(rest, 2))

    angl1 = np.concatenate([good_angl1, rest_angl[:, 0]])
    angl2 = np.concatenate([good_angl2, rest_angl[:, 1]])
    zoff1 = np.concatenate([good_zoff[:, 0], rest_zoff[:, 0]])
    zoff2 = np.concatenate([good_zoff[:, 1], rest_zoff[:, 1]])
    order = rng.permutation(runs)
    angl1, angl2, zoff1, zoff2 = (a[order] for a in (angl1, angl2, zoff1, zoff2))

    chi2 = (zoff1 - 0.5) ** 2 + (zoff2 - 0.5) ** 2

    rows = []
    length = POWDER_SERIES_LENGTH
    for i in range(runs):
        # Constant early peak; the monotone-influence argument for cumulative
        # rank stability needs a single varying amplitude parameter.
        pattern = _truncated_gaussian(length, 100.0, 8.0, 0.5)
        amp = 0.8 + zoff1[i] + zoff2[i] + 0.3 * angl1[i] + 0.3 * angl2[i]
        pattern += _truncated_gaussian(length, float(POWDER_VARYING_PEAK), 6.0, amp)
        pattern += _truncated_gaussian(length, float(POWDER_STABLE_PEAK), 4.0, 2.0)
        rows.append(
            [
                _fmt(angl1[i]),
                _fmt(zoff1[i]),
                _fmt(angl2[i]),
                _fmt(zoff2[i]),
                _fmt(chi2[i]),
                _series_cell(pattern),
            ]
        )
    header = ["angl1", "zoff1", "angl2", "zoff2", "chi2", "pattern"]
    sidecar = {
        "dimensions": {
            "angl1": {"role": "input_control", "sampling": "stochastic"},
            "zoff1": {"role": "input_control", "sampling": "stochastic"},
            "angl2": {"role": "input_control", "sampling": "stochastic"},
            "zoff2": {"role": "input_control", "sampling": "stochastic"},
            "chi2": {"role": "output_derived"},
            "pattern": {"role": "output_direct"},
        },
        "default_sampling": "stochastic",
    }
    return _csv_text(header, rows), sidecar


def synthetic_fixture(runs: int = 500, seed: int = 0, dims: int = 20) -> tuple[str, dict]:
    """Plain numeric table: `dims` uniform columns named d00, d01, ...

    The first half are marked control inputs, the second half direct outputs.
    Used by crossfilter and performance tests.
    """
    if runs < 1 or dims < 1:
        raise UnknownFixture("synthetic fixture needs runs >= 1 and dims >= 1")
    rng = np.random.default_rng(seed)
    data = rng.uniform(0.0, 1.0, size=(runs, dims))
    header = [f"d{i:02d}" for i in range(dims)]
    rows = [[_fmt(v) for v in row] for row in data]
    half = dims // 2
    sidecar = {
        "dimensions": {
            name: {"role": "input_control" if i < half else "output_direct"}
            for i, name in enumerate(header)
        },
        "default_sampling": "stochastic",
    }
    return _csv_text(header, rows), sidecar


def make_fixture(kind: str, runs: int | None = None, seed: int | None = None, dims: int = 20):
    """Dispatch by kind; returns (csv_text, sidecar_dict). A seed of None
    means the kind's own default, so repeated calls stay reproducible."""
    if kind == "edge":
        return edge_fixture(runs if runs is not None else 50)
    if kind == "powder-like":
        return powder_fixture(runs if runs is not None else 50, seed=7 if seed is None else seed)
    if kind == "synthetic":
        return synthetic_fixture(
            runs if runs is not None else 500, seed=0 if seed is None else seed, dims=dims
        )
    raise UnknownFixture(kind)


def load_fixture(
    kind: str, runs: int | None = None, seed: int | None = None, dims: int = 20
) -> RunTable:
    """Build the fixture and push it through the real ingestion path."""
    text, sidecar = make_fixture(kind, runs=runs, seed=seed, dims=dims)
    max_runs = max(1000, runs or 0)
    table = load_csv(text, IngestOptions(max_runs=max_runs))
    return apply_sidecar(table, sidecar)
