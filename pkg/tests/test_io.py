import json
import math
from pathlib import Path

import pytest

from flatsurface import (enumerate_arcs, load_surface, parse_surface, raw_length_spectrum,
                         serialize_surface, triangulate, unfold, validate_unfolding)
from flatsurface import fixtures
from flatsurface.errors import (DanglingGluing, DegenerateTriangle, MismatchedEdgeLengths,
                                SurfaceSyntaxError, UnlabeledBoundary)
from flatsurface.io import (arc_from_dict, arc_to_dict, dump_result, load_result, revalidate_result,
                            triangulation_to_dict, unfolding_to_dict)

FILES = sorted((Path(__file__).resolve().parent.parent / "fixtures").glob("*.surf"))

TORUS = """flatsurf/1 torus
# unit square, one labeled point
tri 0 coords 0 0 1 0 1 1
tri 1 coords 0 0 1 1 0 1
glue 0.0 1.1
glue 0.1 1.2
glue 0.2 1.0
label 0.0
"""


def _shape(s):
    t = s.topology()
    return (t.euler_characteristic, t.orientable, t.boundary_components, len(s.labels),
            round(s.area(), 12))


@pytest.mark.parametrize("path", FILES, ids=[p.stem for p in FILES])
def test_fixture_files_round_trip(path):
    s = load_surface(path)
    text = serialize_surface(s)
    again = parse_surface(text)
    assert serialize_surface(again) == text
    assert _shape(again) == _shape(s)


def test_files_match_builders():
    for name, s in fixtures.corpus().items():
        loaded = load_surface(Path(FILES[0]).parent / f"{name}.surf")
        assert serialize_surface(loaded) == serialize_surface(s)


def test_parse_torus_text():
    s = parse_surface(TORUS)
    assert s.name == "torus"
    assert _shape(s) == (0, True, 0, 1, 1.0)
    assert len(enumerate_arcs(s, math.sqrt(2))) == 4


def test_sides_form():
    text = """flatsurf/1
tri 0 sides 1 1 1
tri 1 sides 1 1 1
glue 0.0 1.0
glue 0.1 1.2
glue 0.2 1.1
"""
    s = parse_surface(text)
    assert s.topology().euler_characteristic == 2
    assert len(s.labels) == 3
    assert s.area() == pytest.approx(math.sqrt(3) / 2)


def test_bary_label_refines():
    s = parse_surface(TORUS + "label 1 bary 0.25 0.25 0.5\n")
    assert len(s.labels) == 2
    assert len(s.triangles) == 4
    assert s.area() == pytest.approx(1.0)


def test_mismatched_lengths_report_line():
    text = """flatsurf/1
tri 0 sides 1.0 1.0 1.0
tri 1 sides 1.1 1.0 1.0
glue 0.0 1.0
"""
    with pytest.raises(MismatchedEdgeLengths, match="line 4"):
        parse_surface(text)


def test_syntax_errors_carry_position():
    with pytest.raises(SurfaceSyntaxError) as info:
        parse_surface("flatsurf/1\ntri 0 coords 0 0 1 0 x 1\n")
    assert (info.value.line, info.value.column) == (2, 22)
    with pytest.raises(SurfaceSyntaxError) as info:
        parse_surface("hello\n")
    assert info.value.line == 1
    with pytest.raises(SurfaceSyntaxError) as info:
        parse_surface("flatsurf/1\n\n  bogus 1\n")
    assert (info.value.line, info.value.column) == (3, 3)


def test_semantic_errors():
    with pytest.raises(DanglingGluing, match="line 3"):
        parse_surface("flatsurf/1\ntri 0 sides 1 1 1\nglue 0.0 4.1\n")
    with pytest.raises(DegenerateTriangle):
        parse_surface("flatsurf/1\ntri 0 sides 1 1 2\n")
    open_square = """flatsurf/1
tri 0 coords 0 0 1 0 1 1
tri 1 coords 0 0 1 1 0 1
glue 0.0 1.1
glue 0.2 1.0
label 0.1
"""
    with pytest.raises(UnlabeledBoundary):
        parse_surface(open_square)


def test_arc_dict_round_trip():
    s = fixtures.octagon_genus2()
    for a in enumerate_arcs(s, 2.0):
        b = arc_from_dict(json.loads(json.dumps(arc_to_dict(a))))
        assert b.crossing.key() == a.crossing.key()
        assert b.length == a.length


def test_results_revalidate(tmp_path):
    s = fixtures.square_torus()
    tri = triangulate(s)
    dump_result(triangulation_to_dict(tri), tmp_path / "t.json")
    assert revalidate_result(s, load_result(tmp_path / "t.json")) == []
    unf = unfold(s)
    dump_result(unfolding_to_dict(unf, validate_unfolding(s, unf)), tmp_path / "u.json")
    data = load_result(tmp_path / "u.json")
    assert revalidate_result(s, data) == []
    data["cut_arcs"][0]["length"] += 0.5
    assert revalidate_result(s, data) != []


def test_spectrum_file_is_stable(tmp_path):
    from flatsurface.io import spectrum_to_dict

    s = fixtures.tetrahedron()
    a = dump_result(spectrum_to_dict(s, raw_length_spectrum(s, 2.0)), tmp_path / "a.json")
    b = dump_result(spectrum_to_dict(s, raw_length_spectrum(s, 2.0)), tmp_path / "b.json")
    assert a == b
