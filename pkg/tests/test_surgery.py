import math

import pytest

from flatsurface import (barycentric_refine, classify_simple_loop, cut_along, embed_path,
                         enumerate_arcs, enumerate_loops, gauss_bonnet_check, raw_length_spectrum,
                         refine_at_point, reglue, trace_ray)
from flatsurface import fixtures
from flatsurface.geodesics import make_multiarc

CORPUS = fixtures.corpus()


def _spectra_match(a, b, tol=1e-9):
    A, B = a.as_multiset(), b.as_multiset()
    return len(A) == len(B) and all(abs(x - y) <= tol for x, y in zip(A, B))


def _angles(s):
    return sorted(s.vertex(v).angle for v in s.labels)


def test_cut_sphere_along_arc_gives_disk():
    s = fixtures.tetrahedron()
    a = enumerate_arcs(s, 1.5)[0]
    rec = cut_along(s, a)
    t = rec.cut.topology()
    assert (t.components, t.euler_characteristic, t.boundary_components) == (1, 1, 1)
    assert rec.cut.area() == pytest.approx(s.area())
    assert abs(gauss_bonnet_check(rec.cut)) < 1e-9


def test_cut_torus_along_loop_gives_annulus():
    s = fixtures.square_torus()
    loop = enumerate_loops(s, 1.0 + 1e-9)[0]
    rec = cut_along(s, loop.multiarc)
    t = rec.cut.topology()
    assert (t.euler_characteristic, t.boundary_components, t.orientable) == (0, 2, True)
    glued = reglue(rec)
    assert glued.topology().euler_characteristic == 0
    assert glued.topology().boundary_components == 0
    assert glued.area() == pytest.approx(1.0)


def test_embed_slanted_loop_preserves_area():
    s = fixtures.square_torus()
    a = trace_ray(s, (0, 0), (2.0, 1.0), 3.0)
    path = embed_path(s, make_multiarc(s, [a]))
    assert path.surface.area() == pytest.approx(1.0)
    assert len(path.surface.triangles) > len(s.triangles)
    assert math.fsum(path.surface.side_length(*side) for side, _ in path.chain) == pytest.approx(math.sqrt(5))
    rec = cut_along(s, make_multiarc(s, [a]))
    assert rec.cut.topology().boundary_components == 2


def test_cut_pants_between_boundaries():
    s = fixtures.three_holed_sphere()
    comp = {}
    for i, c in enumerate(s.boundary_components()):
        for v in c["vertices"]:
            comp[v] = i
    a = next(a for a in enumerate_arcs(s, 2 * s.diameter())
             if comp[a.start] != comp[a.end])
    t = cut_along(s, a).cut.topology()
    assert (t.euler_characteristic, t.boundary_components) == (0, 2)


@pytest.mark.parametrize("name", ["tetrahedron", "square-torus", "flat-annulus", "mobius-square"])
def test_cut_and_reglue_round_trip(name):
    s = CORPUS[name]
    a = enumerate_arcs(s, 2 * s.diameter())[-1]
    rec = cut_along(s, a)
    back = reglue(rec)
    L = 2 * s.diameter()
    assert _spectra_match(raw_length_spectrum(s, L), raw_length_spectrum(back, L))
    assert _angles(back) == pytest.approx(_angles(s), abs=1e-9)
    assert back.topology().euler_characteristic == s.topology().euler_characteristic


@pytest.mark.parametrize("name", ["tetrahedron", "square-torus", "three-holed-sphere"])
def test_barycentric_refinement_invariance(name):
    s = CORPUS[name]
    r = barycentric_refine(s)
    assert len(r.triangles) == 3 * len(s.triangles)
    assert r.topology().euler_characteristic == s.topology().euler_characteristic
    assert r.labels == s.labels or len(r.labels) == len(s.labels)
    assert _spectra_match(raw_length_spectrum(s, 2.0), raw_length_spectrum(r, 2.0))


def test_refine_at_point_adds_label():
    s = fixtures.square_torus()
    r, vid = refine_at_point(s, 0, (1 / 3, 1 / 3, 1 / 3))
    assert vid in r.labels
    assert r.vertex(vid).angle == pytest.approx(2 * math.pi)
    assert len(r.labels) == 2
    assert r.area() == pytest.approx(1.0)
    assert abs(gauss_bonnet_check(r)) < 1e-9


def test_classification():
    s = fixtures.square_torus()
    for lp in enumerate_loops(s, 1.5):
        if lp.simple:
            assert classify_simple_loop(s, lp) == "essential"
    ann = fixtures.flat_annulus()
    tags = {classify_simple_loop(ann, lp) for lp in enumerate_loops(ann, 2 * ann.diameter())
            if lp.simple}
    assert "essential" not in tags
