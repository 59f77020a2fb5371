from fsrkit.plotting import pole_table, verdict_heatmap, verdict_matrix
from fsrkit.verdict import false, true, unknown


ROWS = [(0, "A", true()), (0, "B", false()), (1, "A", unknown("bound")), (1, "B", true())]


def test_verdict_matrix_layout():
    grid, stages, sentences = verdict_matrix(ROWS)
    assert stages == [0, 1] and sentences == ["A", "B"]
    assert grid.tolist() == [[2, 1], [0, 2]]


def test_figures_are_png(tmp_path):
    heat = verdict_heatmap(ROWS, tmp_path / "sub" / "h.png")
    table = pole_table(["0", "1"], {"empty": [false(), false()], "full": [true(), true()]},
                       tmp_path / "p.png")
    for path in (heat, table):
        assert path.read_bytes()[:4] == b"\x89PNG"
