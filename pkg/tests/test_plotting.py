from flatsurface import fixtures, raw_length_spectrum, triangulate, unfold
from flatsurface.plotting import plot_development, plot_spectrum, plot_triangulation

PNG = b"\x89PNG"


def test_figures_are_written(tmp_path):
    s = fixtures.three_holed_sphere()
    plot_development(unfold(s), tmp_path / "d.png")
    plot_triangulation(triangulate(s), tmp_path / "t.png")
    plot_spectrum(raw_length_spectrum(s, 2 * s.diameter()), tmp_path / "s.png")
    for name in ("d", "t", "s"):
        assert (tmp_path / f"{name}.png").read_bytes().startswith(PNG)


def test_svg_figure(tmp_path):
    plot_spectrum(raw_length_spectrum(fixtures.square_torus(), 3.0), tmp_path / "s.svg")
    assert b"<svg" in (tmp_path / "s.svg").read_bytes()
