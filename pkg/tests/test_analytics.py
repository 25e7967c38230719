import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from runviz import data_model as dm
from runviz.analytics import (
    DENSITY_GRID,
    DegenerateExtent,
    EmptySelection,
    FilterState,
    InvalidRange,
    NonQuantitativeFilter,
    apply_filters,
    boxplot_series,
    cumulative_curve,
    density_contours,
    density_grid,
    histogram,
    select_run,
)
from runviz.data_model import UnknownRun


def quant_table(columns: dict[str, list[float]]):
    names = list(columns)
    n = len(next(iter(columns.values())))
    rows = [",".join(repr(float(columns[c][r])) for c in names) for r in range(n)]
    return dm.load_csv("\n".join([",".join(names)] + rows))


def series_table(rows: list[list[float]]):
    body = "\n".join('"[' + ", ".join(repr(float(v)) for v in row) + ']"' for row in rows)
    return dm.load_csv("f\n" + body)


class TestFilterState:
    def test_range_validation(self):
        with pytest.raises(InvalidRange):
            FilterState().with_range("a", 2.0, 1.0)
        with pytest.raises(InvalidRange):
            FilterState().with_range("a", float("nan"), 1.0)

    def test_value_semantics(self):
        a = FilterState().with_range("x", 0.0, 1.0)
        b = FilterState().with_range("x", 0.0, 1.0)
        assert a == b
        assert a.without_range("x") == FilterState()
        assert a.with_selected_run(3) != a

    def test_without_missing_range_is_noop(self):
        a = FilterState().with_range("x", 0.0, 1.0)
        assert a.without_range("zz") == a

    def test_json_round_trip(self):
        f = FilterState().with_range("x", 0.0, 1.0).with_selected_run(2)
        assert FilterState.from_json_dict(f.to_json_dict()) == f


class TestApplyFilters:
    def test_closed_intervals(self):
        table = quant_table({"x": [0.0, 1.0, 2.0, 3.0]})
        f = FilterState().with_range("x", 1.0, 2.0)
        assert apply_filters(table, f).pass_ids() == [1, 2]

    def test_conjunction(self):
        table = quant_table({"x": [0, 1, 2, 3], "y": [3, 2, 1, 0]})
        f = FilterState().with_range("x", 1, 3).with_range("y", 1, 3)
        assert apply_filters(table, f).pass_ids() == [1, 2]

    def test_non_quantitative_filter_rejected(self):
        table = series_table([[1, 2], [3, 4]])
        with pytest.raises(NonQuantitativeFilter):
            apply_filters(table, FilterState().with_range("f", 0, 1))

    def test_no_ranges_passes_everything(self, synthetic_table):
        res = apply_filters(synthetic_table, FilterState())
        assert res.pass_count == synthetic_table.run_count

    @settings(max_examples=60, deadline=None)
    @given(
        data=st.lists(
            st.tuples(
                st.floats(-100, 100),
                st.floats(-100, 100),
                st.floats(-100, 100),
            ),
            min_size=1,
            max_size=40,
        ),
        bounds=st.lists(
            st.tuples(st.sampled_from(["a", "b", "c"]), st.floats(-50, 50), st.floats(0, 60)),
            max_size=3,
        ),
    )
    def test_against_brute_force(self, data, bounds):
        table = quant_table(
            {
                "a": [r[0] for r in data],
                "b": [r[1] for r in data],
                "c": [r[2] for r in data],
            }
        )
        f = FilterState()
        ranges = {}
        for name, lo, width in bounds:
            f = f.with_range(name, lo, lo + width)
            ranges[name] = (lo, lo + width)
        rows = [dict(zip("abc", r)) for r in data]
        expected = oracles.brute_force_pass(rows, ranges)
        assert apply_filters(table, f).pass_ids() == expected

    def test_select_run(self, edge_table):
        f = select_run(edge_table, FilterState(), 7)
        assert f.selected_run == 7
        f = select_run(edge_table, f, None)
        assert f.selected_run is None
        with pytest.raises(UnknownRun):
            select_run(edge_table, FilterState(), 50)


class TestHistogram:
    def test_exact_against_sort_oracle(self, synthetic_table):
        rng = np.random.default_rng(11)
        for dim in ("d00", "d07", "d19"):
            values = [float(v) for v in synthetic_table.values(dim)]
            for bins in (1, 7, 10, 32):
                got = histogram(synthetic_table, dim, bins=bins)
                assert [b.count_all for b in got] == oracles.sort_histogram(values, bins)

    def test_filtered_counts(self):
        table = quant_table({"x": [0.0, 1.0, 2.0, 3.0, 4.0], "y": [0, 1, 0, 1, 0]})
        f = FilterState().with_range("y", 1, 1)
        got = histogram(table, "x", f, bins=5)
        assert [b.count_all for b in got] == [1, 1, 1, 1, 1]
        assert [b.count_pass for b in got] == [0, 1, 0, 1, 0]

    def test_extent_is_unfiltered(self):
        table = quant_table({"x": [0.0, 10.0, 20.0]})
        f = FilterState().with_range("x", 0.0, 5.0)
        got = histogram(table, "x", f, bins=2)
        assert got[0].lo == 0.0 and got[-1].hi == 20.0

    def test_constant_column_widens(self):
        table = quant_table({"x": [3.0, 3.0, 3.0]})
        got = histogram(table, "x", bins=4)
        assert got[0].lo == 2.5 and got[-1].hi == 3.5
        assert sum(b.count_all for b in got) == 3

    def test_boundary_value_goes_to_upper_bin(self):
        table = quant_table({"x": [0.0, 0.5, 1.0]})
        got = histogram(table, "x", bins=2)
        assert [b.count_all for b in got] == [1, 2]

    def test_maximum_lands_in_last_bin(self):
        table = quant_table({"x": [0.0, 1.0]})
        got = histogram(table, "x", bins=3)
        assert got[-1].count_all == 1

    def test_bin_count_validation(self):
        table = quant_table({"x": [0.0, 1.0]})
        with pytest.raises(InvalidRange):
            histogram(table, "x", bins=0)

    @settings(max_examples=60, deadline=None)
    @given(
        values=st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=60),
        bins=st.integers(1, 24),
    )
    def test_sort_oracle_property(self, values, bins):
        table = quant_table({"x": values})
        got = histogram(table, "x", bins=bins)
        assert [b.count_all for b in got] == oracles.sort_histogram(values, bins)
        assert sum(b.count_all for b in got) == len(values)


class TestBoxplots:
    def test_against_oracle(self, powder_table):
        stats = boxplot_series(powder_table, "pattern")
        data = np.asarray(powder_table.values("pattern"))
        for pos in (0, 100, 196, 291, data.shape[1] - 1):
            expected = oracles.box_oracle([float(v) for v in data[:, pos]])
            got = stats[pos]
            for key in ("q1", "median", "q3", "whisker_lo", "whisker_hi"):
                assert abs(getattr(got, key) - expected[key]) <= 1e-9, (pos, key)
            assert list(got.outliers) == expected["outliers"]

    def test_ordering_invariant(self, powder_table):
        for s in boxplot_series(powder_table, "pattern"):
            assert s.whisker_lo <= s.q1 <= s.median <= s.q3 <= s.whisker_hi

    def test_filtered_subset(self, powder_table):
        chi2 = powder_table.values("chi2")
        f = FilterState().with_range("chi2", float(chi2.min()), float(np.quantile(chi2, 0.2)))
        mask = apply_filters(powder_table, f).pass_mask
        stats = boxplot_series(powder_table, "pattern", f)
        data = np.asarray(powder_table.values("pattern"))[mask]
        expected = oracles.box_oracle([float(v) for v in data[:, 196]])
        assert abs(stats[196].median - expected["median"]) <= 1e-9

    def test_invariant_peak_has_zero_iqr(self, powder_table):
        stats = boxplot_series(powder_table, "pattern")
        assert stats[291].q3 - stats[291].q1 == 0.0

    def test_outlier_ids_are_run_ids(self):
        rows = [[0.0], [0.0], [0.0], [0.0], [100.0]]
        table = series_table(rows)
        stats = boxplot_series(table, "f")
        assert list(stats[0].outliers) == [4]

    def test_empty_selection(self, powder_table):
        f = FilterState().with_range("chi2", -10.0, -5.0)
        with pytest.raises(EmptySelection):
            boxplot_series(powder_table, "pattern", f)

    def test_requires_series_dimension(self, powder_table):
        with pytest.raises(NonQuantitativeFilter):
            boxplot_series(powder_table, "chi2")

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-1e4, 1e4), min_size=2, max_size=50))
    def test_quartiles_property(self, values):
        table = series_table([[v] for v in values])
        got = boxplot_series(table, "f")[0]
        expected = oracles.box_oracle(values)
        assert abs(got.q1 - expected["q1"]) <= 1e-9 + 1e-12 * abs(expected["q1"])
        assert abs(got.median - expected["median"]) <= 1e-9 + 1e-12 * abs(expected["median"])
        assert abs(got.q3 - expected["q3"]) <= 1e-9 + 1e-12 * abs(expected["q3"])


class TestDensity:
    def test_riemann_sum_near_one(self, synthetic_table):
        rng = np.random.default_rng(5)
        dims = [d.name for d in synthetic_table.dimensions]
        for _ in range(10):
            x, y = rng.choice(dims, size=2, replace=False)
            lo, hi = sorted(rng.uniform(0, 1, size=2))
            f = FilterState().with_range(str(x), float(lo), float(hi))
            try:
                grid, (x0, x1), (y0, y1) = density_grid(synthetic_table, str(x), str(y), f=f)
            except EmptySelection:
                continue
            dx = (x1 - x0) / DENSITY_GRID
            dy = (y1 - y0) / DENSITY_GRID
            total = oracles.riemann_sum([[float(v) for v in row] for row in grid], dx, dy)
            assert abs(total - 1.0) <= 0.01

    def test_single_run_density_is_symmetric(self):
        table = quant_table({"x": [0.0, 0.5, 1.0], "y": [0.0, 0.5, 1.0]})
        f = FilterState().with_range("x", 0.4, 0.6)
        grid, _, _ = density_grid(table, "x", "y", f=f)
        np.testing.assert_allclose(grid, grid.T, atol=1e-12)

    def test_contour_percentile_levels(self, synthetic_table):
        lines = density_contours(synthetic_table, "d00", "d01")
        percentiles = {c.percentile for c in lines}
        assert percentiles <= {25, 50, 75, 90}
        grid, _, _ = density_grid(synthetic_table, "d00", "d01")
        for c in lines:
            expected = float(np.percentile(grid, c.percentile))
            assert abs(c.level - expected) <= 1e-12

    def test_contours_empty_when_nothing_passes(self, synthetic_table):
        f = FilterState().with_range("d00", 5.0, 6.0)
        assert density_contours(synthetic_table, "d00", "d01", f=f) == []
        with pytest.raises(EmptySelection):
            density_grid(synthetic_table, "d00", "d01", f=f)

    def test_degenerate_extent(self):
        table = quant_table({"x": [1.0, 1.0, 1.0], "y": [0.0, 0.5, 1.0]})
        with pytest.raises(DegenerateExtent):
            density_grid(table, "x", "y")

    def test_weighted_density_shifts_mass(self):
        # two clusters; weight dimension heavily favors the right cluster
        xs = [0.1, 0.11, 0.12, 0.9, 0.91, 0.92]
        ys = [0.5] * 6
        w = [0.0, 0.0, 0.0, 10.0, 10.0, 10.0]
        table = quant_table({"x": xs, "y": [0.5, 0.52, 0.54, 0.5, 0.52, 0.54], "w": w})
        unweighted, (x0, x1), _ = density_grid(table, "x", "y")
        weighted, _, _ = density_grid(table, "x", "y", weight="w")
        centers = x0 + (np.arange(DENSITY_GRID) + 0.5) * (x1 - x0) / DENSITY_GRID
        right = centers > 0.5
        mass = lambda g, side: float(g[:, side].sum())
        assert mass(weighted, right) / mass(weighted, ~right) > mass(unweighted, right) / mass(
            unweighted, ~right
        )

    def test_contour_points_inside_extent(self, synthetic_table):
        lines = density_contours(synthetic_table, "d02", "d03")
        assert lines
        for c in lines:
            for x, y in c.points:
                assert -0.05 <= x <= 1.05 and -0.05 <= y <= 1.05


class TestCumulative:
    def test_flat_series_quarter_steps(self):
        table = series_table([[1, 1, 1, 1]])
        got = cumulative_curve(table, "f", 0)
        np.testing.assert_allclose(got, [0.25, 0.5, 0.75, 1.0])

    def test_ends_at_exactly_one(self, powder_table):
        for run_id in range(0, 50, 7):
            got = cumulative_curve(table=powder_table, dim1d="pattern", run_id=run_id)
            assert got[-1] == 1.0

    def test_negative_values_shifted(self):
        table = series_table([[-1.0, 0.0, 1.0]])
        got = cumulative_curve(table, "f", 0)
        np.testing.assert_allclose(got, oracles.cumulative_oracle([-1.0, 0.0, 1.0]))
        assert got[0] == 0.0

    def test_non_negative_not_shifted(self):
        table = series_table([[1.0, 3.0]])
        np.testing.assert_allclose(cumulative_curve(table, "f", 0), [0.25, 1.0])

    def test_zero_total_uniform_ramp(self):
        table = series_table([[0.0, 0.0, 0.0, 0.0]])
        np.testing.assert_allclose(cumulative_curve(table, "f", 0), [0.25, 0.5, 0.75, 1.0])

    def test_unknown_run(self):
        table = series_table([[1.0, 2.0]])
        with pytest.raises(UnknownRun):
            cumulative_curve(table, "f", 5)

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.floats(-100, 100), min_size=1, max_size=40))
    def test_matches_oracle_and_monotone(self, series):
        table = series_table([series])
        got = cumulative_curve(table, "f", 0)
        np.testing.assert_allclose(got, oracles.cumulative_oracle(series), atol=1e-12)
        assert all(b >= a - 1e-12 for a, b in zip(got, got[1:]))
