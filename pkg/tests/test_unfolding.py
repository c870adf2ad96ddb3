import dataclasses

import pytest

from flatsurface import enumerate_arcs, trace_ray, unfold, validate_unfolding
from flatsurface import fixtures
from flatsurface.errors import NotSimple
from flatsurface.surgery import cut_along
from flatsurface.unfolding import disk_boundary_segments, interior_flatness, unfolding_from_arcs

ALL = dict(fixtures.corpus())
ALL.update({"square-disk": fixtures.square_disk(), "flat-cylinder": fixtures.flat_cylinder(),
            "regular-hexagon": fixtures.regular_hexagon()})


@pytest.fixture(scope="module")
def unfoldings():
    return {name: unfold(s) for name, s in ALL.items()}


@pytest.mark.parametrize("name", sorted(ALL))
def test_unfolding_is_valid(name, unfoldings):
    rep = validate_unfolding(ALL[name], unfoldings[name])
    assert rep.problems == []
    assert rep.flatness < 1e-9


@pytest.mark.parametrize("name", sorted(ALL))
def test_seams_come_in_equal_pairs(name, unfoldings):
    unf = unfoldings[name]
    assert sorted(unf.seam_labels) == list(range(len(unf.cut_arcs)))
    segs = disk_boundary_segments(unf.disk)
    for i in unf.seam_labels:
        lens = [l for tag, _, l in segs if tag == i]
        assert len(lens) == 2
        assert lens[0] == pytest.approx(lens[1], rel=1e-9)


@pytest.mark.parametrize("name", ["tetrahedron", "square-torus", "octagon-genus2", "doubled-triangle"])
def test_cut_graph_euler_identity(name, unfoldings):
    unf = unfoldings[name]
    verts = {v for a in unf.cut_arcs for v in (a.start, a.end)}
    chi = ALL[name].topology().euler_characteristic
    assert len(unf.cut_arcs) - len(verts) == 1 - chi


def test_flat_disk_needs_no_cuts(unfoldings):
    assert unfoldings["square-disk"].cut_arcs == []
    assert unfoldings["regular-hexagon"].cut_arcs == []


def test_development_has_no_overlap(unfoldings):
    assert not any(u.overlap for u in unfoldings.values())


def test_too_few_cuts_leave_a_cone_point():
    s = fixtures.tetrahedron()
    arcs = enumerate_arcs(s, 1.01)
    a = arcs[0]
    b = next(x for x in arcs if x is not a and {x.start, x.end} & {a.start, a.end})
    unf = unfolding_from_arcs(s, [a, b])
    assert interior_flatness(unf.disk) > 3.0
    rep = validate_unfolding(s, unf)
    assert not rep.ok
    assert any("singular interior" in p for p in rep.problems)


def test_crossing_arcs_rejected(unfoldings):
    t = fixtures.square_torus()
    x = trace_ray(t, (0, 0), (1.0, 1.0), 2.0)
    y = trace_ray(t, (1, 2), (1.0, -1.0), 2.0)
    with pytest.raises(NotSimple):
        cut_along(t, [x, y])
    fake = dataclasses.replace(unfoldings["square-torus"], cut_arcs=[x, y])
    rep = validate_unfolding(t, fake)
    assert any("interior intersection" in p for p in rep.problems)


def test_tetrahedron_star_cut(unfoldings):
    arcs = unfoldings["tetrahedron"].cut_arcs
    assert len(arcs) == 3
    assert {a.start for a in arcs} == {0}
    assert sorted(a.end for a in arcs) == [1, 2, 3]
    assert all(a.length == pytest.approx(1.0) for a in arcs)
