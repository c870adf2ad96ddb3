"""Reference surfaces used throughout the test corpus and the shipped .surf files."""

import math

from .surface import build_surface

SQRT3_2 = math.sqrt(3.0) / 2.0
EQUILATERAL = ((0.0, 0.0), (1.0, 0.0), (0.5, SQRT3_2))


def glue_by_names(faces, labels=(), name=None):
    """Build a surface from faces given as (corners, vertex names).

    Sides whose endpoint-name pairs match are glued; a pair seen once is
    boundary.  Names listed in ``labels`` become label hints.
    """
    tris = {}
    sides = {}
    for t, (corners, names) in enumerate(faces):
        tris[t] = corners
        for s in range(3):
            key = frozenset((names[s], names[(s + 1) % 3]))
            sides.setdefault(key, []).append((t, s, names[s]))
    gluings = []
    for key, occ in sorted(sides.items(), key=lambda kv: kv[1][0][:2]):
        if len(occ) == 1:
            continue
        if len(occ) != 2:
            raise ValueError(f"edge {sorted(key)} appears {len(occ)} times")
        (ta, sa, na), (tb, sb, nb) = occ
        gluings.append(((ta, sa), (tb, sb), na == nb))
    hints = []
    wanted = set(labels)
    for t, (corners, names) in enumerate(faces):
        for c, n in enumerate(names):
            if n in wanted:
                hints.append((t, c))
                wanted.discard(n)
    return build_surface(tris, gluings, hints, name=name)


def tetrahedron():
    """Regular tetrahedron with unit edges: four cone points of angle pi."""
    faces = [
        (EQUILATERAL, ("A", "B", "C")),
        (EQUILATERAL, ("A", "D", "B")),
        (EQUILATERAL, ("A", "C", "D")),
        (EQUILATERAL, ("B", "D", "C")),
    ]
    return glue_by_names(faces, name="tetrahedron")


def doubled_triangle():
    """Two unit equilateral triangles glued along their boundaries."""
    faces = [
        (EQUILATERAL, ("A", "B", "C")),
        (EQUILATERAL, ("A", "C", "B")),
    ]
    return glue_by_names(faces, name="doubled-triangle")


def _square_pair(w=1.0, h=1.0):
    return {
        0: ((0.0, 0.0), (w, 0.0), (w, h)),
        1: ((0.0, 0.0), (w, h), (0.0, h)),
    }


def square_torus(w=1.0, h=1.0, name="square-torus"):
    """Flat torus from a w x h rectangle; the single vertex is labeled."""
    gluings = [((0, 2), (1, 0), False), ((0, 0), (1, 1), False), ((0, 1), (1, 2), False)]
    return build_surface(_square_pair(w, h), gluings, [(0, 0)], name=name)


def thin_torus():
    """A torus of two sliver triangles; pathological for bounded search."""
    return square_torus(1.0, 1e-3, name="thin-torus")


def mobius_square():
    """Unit square with left and right sides glued with a flip; one boundary label."""
    gluings = [((0, 2), (1, 0), False), ((0, 1), (1, 2), True)]
    return build_surface(_square_pair(), gluings, [(0, 0)], name="mobius-square")


def square_disk():
    return build_surface(_square_pair(), [((0, 2), (1, 0), False)], name="square-disk")


def octagon_genus2():
    """Regular octagon (unit sides) with opposite sides glued by translation."""
    r = 0.5 / math.sin(math.pi / 8)
    pts = [(r * math.cos(math.pi / 8 * (2 * k - 3)), r * math.sin(math.pi / 8 * (2 * k - 3)))
           for k in range(8)]
    tris = {i: (pts[0], pts[i + 1], pts[i + 2]) for i in range(6)}
    side_of = {0: (0, 0), 7: (5, 2)}
    for k in range(1, 7):
        side_of[k] = (k - 1, 1)
    gluings = [(side_of[k], side_of[k + 4], False) for k in range(4)]
    gluings += [((i, 2), (i + 1, 0), False) for i in range(5)]
    return build_surface(tris, gluings, name="octagon-genus2")


def _grid_faces(nx, ny, skip=(), dx=1.0, dy=1.0, wrap_x=None):
    faces = []
    for i in range(nx):
        for j in range(ny):
            if (i, j) in skip:
                continue

            def nm(a, b):
                return ((a % wrap_x) if wrap_x else a, b)

            p00, p10 = (i * dx, j * dy), ((i + 1) * dx, j * dy)
            p11, p01 = ((i + 1) * dx, (j + 1) * dy), (i * dx, (j + 1) * dy)
            faces.append(((p00, p10, p11), (nm(i, j), nm(i + 1, j), nm(i + 1, j + 1))))
            faces.append(((p00, p11, p01), (nm(i, j), nm(i + 1, j + 1), nm(i, j + 1))))
    return faces


def flat_annulus():
    """Planar square ring between [-2, 2]^2 and [-1, 1]^2."""
    outer = [(-2.0, -2.0), (2.0, -2.0), (2.0, 2.0), (-2.0, 2.0)]
    inner = [(-1.0, -1.0), (1.0, -1.0), (1.0, 1.0), (-1.0, 1.0)]
    faces = []
    for k in range(4):
        k1 = (k + 1) % 4
        faces.append(((outer[k], outer[k1], inner[k1]), (f"O{k}", f"O{k1}", f"I{k1}")))
        faces.append(((outer[k], inner[k1], inner[k]), (f"O{k}", f"I{k1}", f"I{k}")))
    return glue_by_names(faces, name="flat-annulus")


def three_holed_sphere():
    """5 x 3 block of unit squares with two square holes (a pair of pants)."""
    return glue_by_names(_grid_faces(5, 3, skip={(1, 1), (3, 1)}), name="three-holed-sphere")


def flat_cylinder():
    """4 x 1 cylinder (x periodic) with labels on both boundaries and one mid-height label."""
    faces = _grid_faces(4, 2, dy=0.5, wrap_x=4)
    return glue_by_names(faces, labels=[(0, 0), (0, 2), (0, 1)], name="flat-cylinder")


def regular_hexagon():
    """Regular unit hexagon fanned from an unlabeled centre."""
    pts = [(math.cos(math.pi / 3 * k), math.sin(math.pi / 3 * k)) for k in range(6)]
    faces = [(((0.0, 0.0), pts[k], pts[(k + 1) % 6]), ("c", k, (k + 1) % 6)) for k in range(6)]
    return glue_by_names(faces, name="regular-hexagon")


def corpus():
    """The seven fixtures every pipeline is exercised on."""
    return {
        "tetrahedron": tetrahedron(),
        "doubled-triangle": doubled_triangle(),
        "square-torus": square_torus(),
        "octagon-genus2": octagon_genus2(),
        "mobius-square": mobius_square(),
        "flat-annulus": flat_annulus(),
        "three-holed-sphere": three_holed_sphere(),
    }


def all_fixtures():
    out = corpus()
    out.update({"thin-torus": thin_torus(), "square-disk": square_disk(),
                "flat-cylinder": flat_cylinder(), "regular-hexagon": regular_hexagon()})
    return out


if __name__ == "__main__":
    import sys
    from pathlib import Path

    from .io import serialize_surface

    target = Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures")
    target.mkdir(parents=True, exist_ok=True)
    for name, s in sorted(all_fixtures().items()):
        (target / f"{name}.surf").write_text(serialize_surface(s, name))
