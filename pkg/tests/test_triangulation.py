import pytest

from flatsurface import (triangulate, triangulate_disk_with_interior_labels, triangulate_flat_disk,
                         triangulate_mobius, triangulate_sphere, validate_ideal)
from flatsurface import fixtures
from flatsurface.errors import NotAFlatDisk, NotAMobiusBand, NotASphere
from flatsurface.geodesics import is_simple_arc

ALL = dict(fixtures.corpus())
ALL.update({"square-disk": fixtures.square_disk(), "flat-cylinder": fixtures.flat_cylinder(),
            "regular-hexagon": fixtures.regular_hexagon()})

EULER = {"tetrahedron": (4, 6, 4), "square-torus": (1, 3, 2), "octagon-genus2": (1, 9, 6),
         "doubled-triangle": (3, 3, 2)}


@pytest.fixture(scope="module")
def triangulations():
    return {name: triangulate(s) for name, s in ALL.items()}


@pytest.mark.parametrize("name", sorted(ALL))
def test_triangulation_is_valid(name, triangulations):
    assert validate_ideal(triangulations[name]) == []


@pytest.mark.parametrize("name", sorted(EULER))
def test_euler_counts(name, triangulations):
    c = triangulations[name].counts()
    assert (c["V"], c["E"], c["F"]) == EULER[name]


@pytest.mark.parametrize("name", sorted(ALL))
def test_counts_identities(name, triangulations):
    tri = triangulations[name]
    c = tri.counts()
    assert c["V"] - c["E"] + c["F"] == ALL[name].topology().euler_characteristic
    assert 3 * c["F"] == 2 * c["E"] - c["B"]
    assert c["V"] == len(ALL[name].labels)


@pytest.mark.parametrize("name", sorted(ALL))
def test_face_areas_sum_to_surface_area(name, triangulations):
    tri = triangulations[name]
    assert sum(f.area() for f in tri.faces) == pytest.approx(ALL[name].area(), rel=1e-9)


def test_edges_are_simple_arcs(triangulations):
    tri = triangulations["octagon-genus2"]
    for e in tri.edges:
        assert e.kind == "arc"
        assert is_simple_arc(tri.surface, e.arc)


def test_validator_catches_missing_face(triangulations):
    tri = triangulations["tetrahedron"]
    broken = type(tri)(tri.surface, tri.vertices, tri.edges, tri.faces[:-1])
    problems = validate_ideal(broken)
    assert any("V - E + F" in p for p in problems)


def test_specialised_entry_points():
    assert validate_ideal(triangulate_flat_disk(fixtures.square_disk())) == []
    assert validate_ideal(triangulate_disk_with_interior_labels(fixtures.regular_hexagon())) == []
    assert validate_ideal(triangulate_sphere(fixtures.tetrahedron())) == []
    assert validate_ideal(triangulate_mobius(fixtures.mobius_square())) == []
    with pytest.raises(NotAFlatDisk):
        triangulate_flat_disk(fixtures.square_torus())
    with pytest.raises(NotASphere):
        triangulate_sphere(fixtures.square_torus())
    with pytest.raises(NotAMobiusBand):
        triangulate_mobius(fixtures.flat_annulus())


def test_single_triangle_is_its_own_triangulation():
    from flatsurface import build_surface

    s = build_surface({0: ((0, 0), (2, 0), (0.5, 1.5))}, [])
    tri = triangulate(s)
    assert len(tri.faces) == 1
    assert all(e.kind == "boundary" for e in tri.edges)
    assert sorted(tri.faces[0].lengths) == pytest.approx(sorted(s.side_length(0, k) for k in range(3)))


def test_mobius_with_one_label(triangulations):
    s = ALL["mobius-square"]
    assert len(s.labels) == 1
    c = triangulations["mobius-square"].counts()
    assert (c["V"], c["E"], c["F"], c["B"]) == (1, 2, 1, 1)
