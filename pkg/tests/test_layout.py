import pytest
from hypothesis import given
from hypothesis import strategies as st

from runviz.design_space import EncodingState, VisOptionId
from runviz.layout import (
    Channel,
    ColumnSource,
    NoSmd,
    NotApplicable,
    OutOfRange,
    RowKind,
    detail_for,
    layout_smd,
    single_chart_cell,
)


def names(prefix, n):
    return tuple(f"{prefix}{i}" for i in range(n))


class TestGridStructure:
    def test_pc_two_fields_no_channels(self):
        enc = EncodingState(s1=("a", "b", "c"), s2=("d", "e"))
        grid = layout_smd(VisOptionId.PC, enc)
        assert grid.shape == (1, 3)
        assert [c.source for c in grid.columns] == [
            ColumnSource.S1,
            ColumnSource.S2,
            ColumnSource.S1_PLUS_S2,
        ]
        assert grid.cells[0][0].dims == ("a", "b", "c")
        assert grid.cells[0][1].dims == ("d", "e")
        assert grid.cells[0][2].dims == ("a", "b", "c", "d", "e")

    def test_splom_never_emits_combined_column(self):
        enc = EncodingState(s1=("a", "b", "c"), s2=("d", "e", "f"))
        for option in (VisOptionId.SPLOM, VisOptionId.RSPLOM):
            grid = layout_smd(option, enc)
            assert grid.shape == (1, 2)
            assert [c.source for c in grid.columns] == [ColumnSource.S1, ColumnSource.S2]

    def test_color_rows_in_field_order(self):
        enc = EncodingState(s1=("a", "b", "c"), s2=("d",), color=("q", "r"))
        grid = layout_smd(VisOptionId.PC, enc)
        assert grid.shape == (3, 3)
        assert grid.rows[0].kind is RowKind.SPATIAL_ONLY
        assert (grid.rows[1].kind, grid.rows[1].dim) == (RowKind.COLOR, "q")
        assert (grid.rows[2].kind, grid.rows[2].dim) == (RowKind.COLOR, "r")
        for col in range(3):
            assert grid.cells[0][col].color is None
            assert grid.cells[1][col].color == "q"
            assert grid.cells[2][col].color == "r"

    def test_opacity_rows_after_color_rows(self):
        enc = EncodingState(s1=("a", "b"), s2=("c",), color=("q",), opacity=("o",))
        grid = layout_smd(VisOptionId.SP, enc)
        assert [r.kind for r in grid.rows] == [
            RowKind.SPATIAL_ONLY,
            RowKind.COLOR,
            RowKind.OPACITY,
        ]
        assert grid.cells[2][0].opacity == "o"
        assert grid.cells[2][0].color is None

    def test_single_field_grid(self):
        grid = layout_smd(VisOptionId.PC, EncodingState(s2=("x", "y")))
        assert grid.shape == (1, 1)
        assert grid.columns[0].source is ColumnSource.S2

    @given(
        n_s1=st.integers(0, 5),
        n_s2=st.integers(0, 5),
        n_color=st.integers(0, 4),
        n_opacity=st.integers(0, 4),
        option=st.sampled_from(
            [VisOptionId.SP, VisOptionId.WDCP, VisOptionId.SPLOM, VisOptionId.RSPLOM,
             VisOptionId.PSC, VisOptionId.PC]
        ),
    )
    def test_grid_size_law(self, n_s1, n_s2, n_color, n_opacity, option):
        enc = EncodingState(
            s1=names("a", n_s1),
            s2=names("b", n_s2),
            color=names("c", n_color),
            opacity=names("o", n_opacity),
        )
        total = n_s1 + n_s2
        matrix = option in (VisOptionId.SPLOM, VisOptionId.RSPLOM)
        if total == 0 or (matrix and total < 3):
            with pytest.raises(NotApplicable):
                layout_smd(option, enc)
            return
        grid = layout_smd(option, enc)
        expected_rows = 1 + n_color + n_opacity
        expected_cols = (n_s1 > 0) + (n_s2 > 0) + (n_s1 > 0 and n_s2 > 0 and not matrix)
        assert grid.shape == (expected_rows, expected_cols)
        assert grid.selected_cell == (1, 1)
        # every spatial dim reachable somewhere in the grid
        encoded = set()
        for row in grid.cells:
            for cell in row:
                encoded.update(cell.dims)
                for sw in cell.switches:
                    encoded.update(sw.candidates)
        assert set(enc.s1 + enc.s2) <= encoded

    def test_hist_has_no_smd(self):
        with pytest.raises(NoSmd):
            layout_smd(VisOptionId.HIST, EncodingState(s1=("a",)))

    def test_not_applicable_on_empty(self):
        with pytest.raises(NotApplicable):
            layout_smd(VisOptionId.SP, EncodingState())


class TestSwitches:
    def test_sp_three_dim_column_switches_axes(self):
        enc = EncodingState(s1=("a", "b", "c"), s2=("d", "e"))
        grid = layout_smd(VisOptionId.SP, enc)
        cell = grid.cells[0][0]
        assert (cell.x, cell.y) == ("a", "b")
        kinds = {sw.channel: sw for sw in cell.switches}
        assert set(kinds) == {Channel.X, Channel.Y}
        assert kinds[Channel.X].candidates == ("a", "b", "c")
        assert kinds[Channel.X].active == "a"
        assert kinds[Channel.Y].active == "b"

    def test_sp_two_dim_column_has_no_axis_switch(self):
        enc = EncodingState(s1=("a", "b"))
        grid = layout_smd(VisOptionId.SP, enc)
        assert grid.cells[0][0].switches == ()

    def test_sp_single_dim_duplicates_axes(self):
        grid = layout_smd(VisOptionId.SP, EncodingState(s1=("a",)))
        cell = grid.cells[0][0]
        assert (cell.x, cell.y) == ("a", "a")

    def test_color_switch_when_field_has_multiple_dims(self):
        enc = EncodingState(s1=("a", "b"), color=("q", "r"))
        grid = layout_smd(VisOptionId.SP, enc)
        row2 = grid.cells[1][0]
        color_switches = [s for s in row2.switches if s.channel is Channel.COLOR]
        assert len(color_switches) == 1
        assert color_switches[0].candidates == ("q", "r")
        assert color_switches[0].active == "q"
        row3 = grid.cells[2][0]
        assert [s.active for s in row3.switches if s.channel is Channel.COLOR] == ["r"]

    def test_no_color_switch_for_single_dim_field(self):
        enc = EncodingState(s1=("a", "b"), color=("q",))
        grid = layout_smd(VisOptionId.SP, enc)
        assert all(s.channel is not Channel.COLOR for s in grid.cells[1][0].switches)

    def test_pc_never_switches_axes(self):
        enc = EncodingState(s1=("a", "b", "c", "d"))
        grid = layout_smd(VisOptionId.PC, enc)
        cell = grid.cells[0][0]
        assert cell.axes == ("a", "b", "c", "d")
        assert all(s.channel not in (Channel.X, Channel.Y) for s in cell.switches)


class TestDetailFor:
    def test_identity_on_default(self):
        enc = EncodingState(s1=("a", "b", "c"), s2=("d", "e"))
        grid = layout_smd(VisOptionId.PC, enc)
        cell = detail_for(grid, (1, 1))
        assert cell is grid.cells[0][0]
        assert grid.selected_cell == (1, 1)

    def test_combined_column_cell(self):
        enc = EncodingState(s1=("a", "b", "c"), s2=("d", "e"))
        grid = layout_smd(VisOptionId.PC, enc)
        cell = detail_for(grid, (1, 3))
        assert cell.dims == ("a", "b", "c", "d", "e")
        assert grid.selected_cell == (1, 3)

    def test_color_row_cell(self):
        enc = EncodingState(s1=("a", "b"), color=("q", "r"))
        grid = layout_smd(VisOptionId.SP, enc)
        assert detail_for(grid, (3, 1)).color == "r"

    def test_out_of_range(self):
        grid = layout_smd(VisOptionId.SP, EncodingState(s1=("a", "b")))
        for bad in ((0, 1), (1, 0), (2, 1), (1, 2)):
            with pytest.raises(OutOfRange):
                detail_for(grid, bad)


class TestSingleChartCell:
    def test_hist_uses_first_spatial_dim(self):
        enc = EncodingState(s1=("a", "b"), s2=("c",))
        cell = single_chart_cell(VisOptionId.HIST, enc)
        assert cell.x == "a"
        xs = [s for s in cell.switches if s.channel is Channel.X]
        assert len(xs) == 1
        assert xs[0].candidates == ("a", "b", "c")

    def test_hist_single_dim_no_switch(self):
        cell = single_chart_cell(VisOptionId.HIST, EncodingState(s1=("a",)))
        assert cell.switches == ()

    def test_object_cell(self):
        cell = single_chart_cell(VisOptionId.LINE1D, EncodingState(object=("f",)), object_dim="f")
        assert cell.object_dim == "f"
        assert cell.option is VisOptionId.LINE1D

    def test_json_shape(self):
        enc = EncodingState(s1=("a", "b"), s2=("c",), color=("q",))
        grid = layout_smd(VisOptionId.SP, enc)
        data = grid.to_json_dict()
        assert data["option"] == "SP"
        assert data["shape"] == [2, 3]
        assert data["selected_cell"] == [1, 1]
        assert [c["source"] for c in data["columns"]] == ["s1", "s2", "s1+s2"]
        assert data["cells"][1][0]["color"] == "q"
