"""Ideal triangulations built by repeatedly cutting along shortest simple arcs."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

from . import _geom as g
from .errors import NotADisk, NotAFlatDisk, NotAMobiusBand, NotASphere, NoArcExists
from .geodesics import (DEFAULT_BUDGET, arcs_interiors_disjoint, enumerate_arcs, is_simple_arc,
                        trace_ray, validate_arc, _initial_bound)
from .surgery import cut_along


@dataclass(frozen=True)
class Edge:
    id: int
    kind: str  # 'arc' or 'boundary'
    start: int
    end: int
    length: float
    arc: object = None  # Arc on the original surface for interior edges
    sides: tuple = ()  # original boundary sides for boundary edges


@dataclass(frozen=True)
class Face:
    edges: tuple  # three edge ids in boundary order (repeats allowed)
    lengths: tuple
    vertices: tuple  # original vertex ids at the corners
    piece: object = None

    def area(self):
        a, b, c = sorted(self.lengths, reverse=True)
        # Kahan's stable Heron formula
        q = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c))
        return 0.25 * math.sqrt(max(q, 0.0))


@dataclass
class IdealTriangulation:
    surface: object
    vertices: list
    edges: list
    faces: list
    pieces: list = field(default_factory=list)
    cut_records: list = field(default_factory=list)

    @property
    def boundary_edge_count(self):
        return sum(1 for e in self.edges if e.kind == "boundary")

    def counts(self):
        return {"V": len(self.vertices), "E": len(self.edges), "F": len(self.faces),
                "B": self.boundary_edge_count}


# ----------------------------------------------------------------------
# helpers


def _is_disk(s):
    topo = s.topology()
    return topo.components == 1 and topo.euler_characteristic == 1 and topo.boundary_components == 1


def _interior_labels(s):
    return [v for v in sorted(s.labels) if not s.vertex(v).on_boundary]


def is_flat_disk(s):
    return _is_disk(s) and not _interior_labels(s)


def is_triangle_piece(s):
    return is_flat_disk(s) and len(s.labels) == 3


def boundary_chains(surface):
    """Boundary split at labeled vertices: [(start vid, end vid, sides, length)]."""
    out = []
    for comp in surface.boundary_components():
        cyc = surface.boundary_cycle(comp["sides"])
        labeled = [i for i, (t, s, fc, tc) in enumerate(cyc) if surface.vertex_at(t, fc) in surface.labels]
        if not labeled:
            continue
        i0 = labeled[0]
        cyc = cyc[i0:] + cyc[:i0]
        cur = []
        start = surface.vertex_at(cyc[0][0], cyc[0][2])
        for t, s, fc, tc in cyc:
            cur.append((t, s))
            v = surface.vertex_at(t, tc)
            if v in surface.labels:
                length = math.fsum(surface.side_length(*x) for x in cur)
                out.append((start, v, tuple(cur), length))
                cur, start = [], v
    return out


def _tag_boundary(surface):
    chains = boundary_chains(surface)
    tags = dict(surface.side_tags)
    for i, (_, _, sides, _) in enumerate(chains):
        for side in sides:
            tags[side] = i
    tagged = surface._derive(surface.triangles, surface.gluings, surface.labeled_corners,
                             surface.origin, tags)
    return tagged, chains


def _strictly_inside(angle, theta, eps=1e-9):
    return eps < angle < theta - eps


def _rule(piece):
    """Predicate selecting admissible cut arcs for this piece."""
    b = piece.topology().boundary_components
    labels = piece.labels
    interior = set(_interior_labels(piece))
    if b == 0:
        if len(labels) >= 2:
            return lambda a: a.start != a.end
        return lambda a: a.start == a.end
    if interior:
        return lambda a: (a.start in interior) != (a.end in interior)
    if b >= 2:
        comp_of = {}
        for i, comp in enumerate(piece.boundary_components()):
            for v in comp["vertices"]:
                comp_of[v] = i
        return lambda a: comp_of[a.start] != comp_of[a.end]

    def chord(a):
        return (_strictly_inside(a.start_angle, piece.vertex(a.start).angle)
                and _strictly_inside(a.end_angle, piece.vertex(a.end).angle))
    return chord


def choose_cut(piece, *, budget=DEFAULT_BUDGET, max_doublings=40):
    """The shortest simple arc admissible for the next cut of ``piece``."""
    ok = _rule(piece)
    L = _initial_bound(piece)
    seen = set()
    for _ in range(max_doublings):
        for a in enumerate_arcs(piece, L, budget=budget):
            key = a.crossing.key()
            if key in seen or not ok(a):
                continue
            seen.add(key)
            if is_simple_arc(piece, a):
                return a
        L *= 2.0
    raise NoArcExists("no admissible cut arc found")


def decompose(surface, stop, *, budget=DEFAULT_BUDGET):
    """Cut ``surface`` until every piece satisfies ``stop``.

    Returns (tagged surface, boundary chains, cuts, pieces, records) where
    cuts are (edge id, piece, arc) with edge ids following the boundary
    chains and records are the CutRecords of every cut.
    """
    tagged, chains = _tag_boundary(surface)
    work = [tagged]
    cuts = []
    pieces = []
    records = []
    while work:
        piece = work.pop()
        if stop(piece):
            pieces.append(piece)
            continue
        arc = choose_cut(piece, budget=budget)
        eid = len(chains) + len(cuts)
        cuts.append((eid, piece, arc))
        rec = cut_along(piece, arc, tags=[eid])
        records.append(rec)
        work.extend(reversed(rec.children))
    return tagged, chains, cuts, pieces, records


def original_corner(original, piece, t, k):
    """Corner of ``original`` at the position of piece corner (t, k)."""
    t0 = piece.origin[t]
    P = piece.corners(t)[k]
    C = original.corners(t0)
    best = min(range(3), key=lambda c: g.norm(g.sub(C[c], P)))
    if g.norm(g.sub(C[best], P)) > original.clearance() * 10:
        return None
    return (t0, best)


def retrace(original, piece, arc):
    """The arc of ``original`` following a piece arc's start and direction."""
    corner = original_corner(original, piece, *arc.start_corner)
    if corner is None:
        raise ValueError("arc does not start at an original vertex")
    found = trace_ray(original, corner, arc.vector, arc.length * (1 + 1e-9) + original.clearance())
    if found is None or abs(found.length - arc.length) > 1e-7 * max(1.0, arc.length):
        raise ValueError("retraced arc does not match")
    return found


def _face(original, piece):
    comp = piece.boundary_components()[0]
    cyc = piece.boundary_cycle(comp["sides"])
    labeled = [i for i, (t, s, fc, tc) in enumerate(cyc) if piece.vertex_at(t, fc) in piece.labels]
    i0 = labeled[0]
    cyc = cyc[i0:] + cyc[:i0]
    edges, lengths, verts = [], [], []
    cur_tag, cur_len = None, []
    for t, s, fc, tc in cyc:
        if not cur_len:
            corner = original_corner(original, piece, t, fc)
            verts.append(original.vertex_at(*corner))
            cur_tag = piece.side_tags.get((t, s))
        cur_len.append(piece.side_length(t, s))
        if piece.vertex_at(t, tc) in piece.labels:
            edges.append(cur_tag)
            lengths.append(math.fsum(cur_len))
            cur_len = []
    return Face(tuple(edges), tuple(lengths), tuple(verts), piece)


def _build(surface, stop, budget):
    tagged, chains, cuts, pieces, records = decompose(surface, stop, budget=budget)
    edges = []
    for i, (a, b, sides, length) in enumerate(chains):
        edges.append(Edge(i, "boundary", a, b, length, None, sides))
    for eid, piece, arc in cuts:
        orig = retrace(surface, piece, arc)
        edges.append(Edge(eid, "arc", orig.start, orig.end, orig.length, orig))
    return edges, pieces, records


def triangulate(surface, *, budget=DEFAULT_BUDGET):
    """Ideal triangulation whose vertex set is exactly the labeled points."""
    edges, pieces, records = _build(surface, is_triangle_piece, budget)
    faces = [_face(surface, p) for p in pieces]
    faces.sort(key=lambda f: (sorted(f.edges), f.lengths))
    return IdealTriangulation(surface, sorted(surface.labels), edges, faces, pieces, records)


def triangulate_flat_disk(surface, **kw):
    if not is_flat_disk(surface):
        raise NotAFlatDisk("surface is not a disk without interior labels")
    return triangulate(surface, **kw)


def triangulate_disk_with_interior_labels(surface, **kw):
    if not _is_disk(surface):
        raise NotADisk("surface is not a topological disk")
    return triangulate(surface, **kw)


def triangulate_sphere(surface, **kw):
    topo = surface.topology()
    if not (topo.components == 1 and topo.euler_characteristic == 2 and topo.boundary_components == 0):
        raise NotASphere("surface is not a closed sphere")
    return triangulate(surface, **kw)


def triangulate_mobius(surface, **kw):
    topo = surface.topology()
    if topo.orientable or topo.euler_characteristic != 0 or topo.boundary_components != 1:
        raise NotAMobiusBand("surface is not a Mobius band")
    return triangulate(surface, **kw)


def validate_ideal(tri, *, check_disjoint=True):
    """List of violated properties (empty when the triangulation is valid)."""
    s = tri.surface
    problems = []
    labels = s.labels
    rel = 1e-9
    arcs = [e for e in tri.edges if e.kind == "arc"]
    for e in tri.edges:
        if e.start not in labels or e.end not in labels:
            problems.append(f"edge {e.id} has an unlabeled endpoint")
    for e in arcs:
        for p in validate_arc(s, e.arc):
            problems.append(f"edge {e.id}: {p}")
        if not is_simple_arc(s, e.arc):
            problems.append(f"edge {e.id} is not simple")
    if check_disjoint:
        for a, b in combinations(arcs, 2):
            if not arcs_interiors_disjoint(s, a.arc, b.arc):
                problems.append(f"edges {a.id} and {b.id} cross")
    used = {v for e in tri.edges for v in (e.start, e.end)}
    if used != set(labels) and not (not tri.edges and len(labels) == 0):
        problems.append(f"edge endpoints {sorted(used)} differ from labels {sorted(labels)}")
    for i, f in enumerate(tri.faces):
        if len(f.lengths) != 3:
            problems.append(f"face {i} has {len(f.lengths)} sides")
            continue
        a, b, c = sorted(f.lengths)
        if c >= a + b - rel * c:
            problems.append(f"face {i} violates the triangle inequality")
    area = math.fsum(f.area() for f in tri.faces if len(f.lengths) == 3)
    if abs(area - s.area()) > rel * max(1.0, s.area()) * 10:
        problems.append(f"face areas sum to {area}, surface area is {s.area()}")
    V, E, F = len(tri.vertices), len(tri.edges), len(tri.faces)
    B = tri.boundary_edge_count
    chi = s.topology().euler_characteristic
    if V - E + F != chi:
        problems.append(f"V - E + F = {V - E + F}, expected {chi}")
    if 3 * F != 2 * E - B:
        problems.append(f"3F = {3 * F}, 2E - B = {2 * E - B}")
    usage = {}
    for f in tri.faces:
        for e in f.edges:
            usage[e] = usage.get(e, 0) + 1
    for e in tri.edges:
        want = 1 if e.kind == "boundary" else 2
        if usage.get(e.id, 0) != want:
            problems.append(f"edge {e.id} used {usage.get(e.id, 0)} times, expected {want}")
    return problems
