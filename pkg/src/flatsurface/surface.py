"""Compact singular flat surfaces glued from Euclidean triangles.

Sides are indexed so that side ``s`` of a triangle runs from corner ``s`` to
corner ``s + 1`` (mod 3).  A gluing identifies two sides; when ``reversed`` is
False the start of one side meets the end of the other (the orientable
convention for counter-clockwise charts), otherwise start meets start.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from . import _geom as g
from .errors import (
    DanglingGluing,
    DegenerateTriangle,
    EmptyLabelSet,
    MismatchedEdgeLengths,
    NonManifold,
    UnknownVertex,
    UnlabeledBoundary,
)

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Tolerances:
    eps_len: float = 1e-9
    eps_angle: float = 1e-9
    eps_area: float = 1e-12
    # clearance from vertex images, relative to the surface diameter
    eps_clear: float = 1e-9


DEFAULT_TOL = Tolerances()


class Triangle(NamedTuple):
    id: int
    corners: tuple


class Gluing(NamedTuple):
    side_a: tuple
    side_b: tuple
    reversed: bool = False


@dataclass(frozen=True)
class Vertex:
    id: int
    corners: tuple  # (triangle, corner) pairs in star order
    angle: float
    on_boundary: bool
    labeled: bool
    singular: bool = False


@dataclass(frozen=True)
class TopologySummary:
    euler_characteristic: int
    orientable: bool
    boundary_components: int
    genus: int
    vertices: int = 0
    edges: int = 0
    faces: int = 0
    components: int = 1


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, x):
        parent = self.parent
        parent.setdefault(x, x)
        root = x
        while parent[root] != root:
            root = parent[root]
        while parent[x] != root:
            parent[x], x = root, parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


def glued_corner(gluings, t, side, k):
    """Corner across ``side`` of triangle ``t`` identified with corner ``k``."""
    t2, s2, rev = gluings[(t, side)]
    at_start = k == side
    if rev:
        return (t2, s2 if at_start else (s2 + 1) % 3)
    return (t2, (s2 + 1) % 3 if at_start else s2)


def corner_sides(c):
    """The two sides meeting at corner ``c``."""
    return (c, (c + 2) % 3)


def side_other_end(side, c):
    """Corner at the far end of ``side`` as seen from its corner ``c``."""
    return (side + 1) % 3 if c == side else side


class Surface:
    """An immutable labeled singular flat surface.

    Built via :func:`build_surface`; the surgery module constructs derived
    surfaces through :meth:`_derive`.
    """

    def __init__(self, triangles, gluings, labeled_corners=(), *, tol=DEFAULT_TOL,
                 origin=None, side_tags=None, name=None, require_labels=True):
        self.tol = tol
        self.name = name
        tris = {}
        for t, corners in triangles.items():
            pts = tuple((float(p[0]), float(p[1])) for p in corners)
            area = g.signed_area(*pts)
            if abs(area) <= tol.eps_area:
                raise DegenerateTriangle(f"triangle {t} is degenerate (area {area:.3g})")
            if area < 0:
                pts = tuple((-p[0], p[1]) for p in pts)
            tris[t] = pts
        self._tris = tris
        self._glue = dict(gluings)
        self.origin = dict(origin) if origin is not None else {t: t for t in tris}
        self.side_tags = dict(side_tags or {})
        self._check_gluings()

        self._corner_angle = {}
        for t, pts in tris.items():
            for c in range(3):
                self._corner_angle[(t, c)] = g.corner_angle(pts[c], pts[(c + 1) % 3], pts[(c + 2) % 3])

        self._build_vertices(labeled_corners, require_labels)
        self._diameter = None
        self._topology = None

    # ------------------------------------------------------------------
    # construction helpers

    def _check_gluings(self):
        eps = self.tol.eps_len
        for (t, s), (t2, s2, rev) in self._glue.items():
            if t not in self._tris or t2 not in self._tris or s not in (0, 1, 2) or s2 not in (0, 1, 2):
                raise DanglingGluing(f"gluing {t}.{s} <-> {t2}.{s2} references a missing side")
            back = self._glue.get((t2, s2))
            if back != (t, s, rev):
                raise DanglingGluing(f"gluing {t}.{s} <-> {t2}.{s2} is not symmetric")
            if (t, s) == (t2, s2):
                raise DanglingGluing(f"side {t}.{s} is glued to itself")
            la, lb = self.side_length(t, s), self.side_length(t2, s2)
            if abs(la - lb) > eps * max(1.0, la):
                raise MismatchedEdgeLengths(
                    f"glued sides {t}.{s} ({la:.12g}) and {t2}.{s2} ({lb:.12g}) differ in length")

    def _build_vertices(self, labeled_corners, require_labels):
        uf = _UnionFind()
        for t in self._tris:
            for c in range(3):
                uf.find((t, c))
        for (t, s), (t2, s2, rev) in self._glue.items():
            uf.union((t, s), glued_corner(self._glue, t, s, s))
            uf.union((t, (s + 1) % 3), glued_corner(self._glue, t, s, (s + 1) % 3))
        classes = {}
        for corner in sorted(uf.parent):
            classes.setdefault(uf.find(corner), []).append(corner)
        ordered = sorted(classes.values(), key=lambda cs: cs[0])

        glue = self._glue
        self._corner_info = {}
        vertex_of = {}
        raw = []
        for vid, corners in enumerate(ordered):
            cset = set(corners)
            boundary_corners = [c for c in corners
                                if any((c[0], s) not in glue for s in corner_sides(c[1]))]
            on_boundary = bool(boundary_corners)
            if on_boundary:
                start = boundary_corners[0]
                sides = corner_sides(start[1])
                entry = next(s for s in sides if (start[0], s) not in glue)
            else:
                start = corners[0]
                entry = (start[1] + 2) % 3
            star = []
            cur, cur_entry = start, entry
            offset = 0.0
            while True:
                t, c = cur
                exit_side = c if cur_entry != c else (c + 2) % 3
                star.append((cur, cur_entry, exit_side, offset))
                offset += self._corner_angle[cur]
                if (t, exit_side) not in glue:
                    break
                nxt = glued_corner(glue, t, exit_side, c)
                if nxt == start:
                    break
                cur_entry = glue[(t, exit_side)][1]
                cur = nxt
                if len(star) > len(corners):
                    break
            if len(star) != len(corners) or {s[0] for s in star} != cset:
                raise NonManifold(f"vertex with corners {corners[:4]}... has a non-manifold link")
            for corner, entry_side, exit_side, off in star:
                self._corner_info[corner] = (vid, off, entry_side, exit_side)
                vertex_of[corner] = vid
            angle = math.fsum(self._corner_angle[c] for c in sorted(corners))
            raw.append((vid, tuple(s[0] for s in star), angle, on_boundary))
        self._vertex_of = vertex_of

        eps = self.tol.eps_angle
        hinted = {vertex_of[c] for c in labeled_corners if c in vertex_of}
        vertices = []
        for vid, corners, angle, on_boundary in raw:
            flat = (math.pi if on_boundary else TWO_PI)
            singular = abs(angle - flat) > eps
            labeled = singular or vid in hinted
            vertices.append(Vertex(vid, corners, angle, on_boundary, labeled, singular=singular))
        self.vertices = tuple(vertices)
        self.labels = frozenset(v.id for v in vertices if v.labeled)
        self.labeled_corners = frozenset(c for v in vertices if v.labeled for c in v.corners)

        if require_labels:
            if not self.labels:
                raise EmptyLabelSet("surface has no singular points and no label hints")
            for comp in self.boundary_components():
                if not any(vertices[v].labeled for v in comp["vertices"]):
                    raise UnlabeledBoundary(
                        f"boundary component through side {comp['sides'][0]} has no labeled point")

    def _derive(self, triangles, gluings, labeled_corners, origin, side_tags, require_labels=True):
        return Surface(triangles, gluings, labeled_corners, tol=self.tol, origin=origin,
                       side_tags=side_tags, name=self.name, require_labels=require_labels)

    # ------------------------------------------------------------------
    # basic queries

    @property
    def triangles(self):
        return self._tris

    @property
    def gluings(self):
        return self._glue

    def triangle_ids(self):
        return sorted(self._tris)

    def corners(self, t):
        return self._tris[t]

    def side_length(self, t, s):
        pts = self._tris[t]
        return g.norm(g.sub(pts[(s + 1) % 3], pts[s]))

    def partner(self, t, s):
        """(t2, s2, reversed) glued to side (t, s), or None on the boundary."""
        return self._glue.get((t, s))

    def is_boundary_side(self, t, s):
        return (t, s) not in self._glue

    def vertex_at(self, t, c):
        return self._vertex_of[(t, c)]

    def corner_angle(self, t, c):
        return self._corner_angle[(t, c)]

    def corner_info(self, t, c):
        """(vertex id, angular offset in the star, entry side, exit side)."""
        return self._corner_info[(t, c)]

    def vertex(self, vid):
        try:
            return self.vertices[vid]
        except (IndexError, TypeError):
            raise UnknownVertex(f"no vertex {vid!r}") from None

    def boundary_sides(self):
        return [(t, s) for t in sorted(self._tris) for s in range(3) if (t, s) not in self._glue]

    def area(self):
        return math.fsum(abs(g.signed_area(*self._tris[t])) for t in sorted(self._tris))

    def edges(self):
        """Unique mesh edges as representative sides, sorted."""
        seen = set()
        out = []
        for t in sorted(self._tris):
            for s in range(3):
                if (t, s) in seen:
                    continue
                seen.add((t, s))
                p = self._glue.get((t, s))
                if p is not None:
                    seen.add(p[:2])
                out.append((t, s))
        return out

    def clearance(self):
        return self.tol.eps_clear * max(self.diameter(), 1.0)

    def diameter(self):
        """Longest mesh side or largest edge-graph distance between vertices."""
        if self._diameter is None:
            adj = {}
            longest = 0.0
            for t, s in self.edges():
                a = self._vertex_of[(t, s)]
                b = self._vertex_of[(t, (s + 1) % 3)]
                ln = self.side_length(t, s)
                longest = max(longest, ln)
                adj.setdefault(a, []).append((b, ln))
                adj.setdefault(b, []).append((a, ln))
            best = longest
            for src in adj:
                dist = {src: 0.0}
                heap = [(0.0, src)]
                while heap:
                    d, u = heapq.heappop(heap)
                    if d > dist[u]:
                        continue
                    for w, ln in adj[u]:
                        nd = d + ln
                        if nd < dist.get(w, math.inf):
                            dist[w] = nd
                            heapq.heappush(heap, (nd, w))
                best = max(best, max(dist.values()))
            self._diameter = best
        return self._diameter

    def boundary_components(self):
        """List of dicts with the boundary sides and vertex ids of each component, ordered."""
        sides = self.boundary_sides()
        uf = _UnionFind()
        ends = {}
        for side in sides:
            uf.find(side)
            t, s = side
            for c in (s, (s + 1) % 3):
                v = self._vertex_of[(t, c)]
                if v in ends:
                    uf.union(ends[v], side)
                else:
                    ends[v] = side
        comps = {}
        for side in sides:
            comps.setdefault(uf.find(side), []).append(side)
        out = []
        for root in sorted(comps):
            ss = comps[root]
            vs = sorted({self._vertex_of[(t, c)] for t, s in ss for c in (s, (s + 1) % 3)})
            out.append({"sides": ss, "vertices": vs})
        return out

    def boundary_cycle(self, comp_sides):
        """Order the sides of one boundary component as a cycle.

        Returns a list of (t, s, from_corner, to_corner) in walking order,
        beginning at the smallest side.
        """
        start = min(comp_sides)
        cur, from_c = start, start[1]
        order = []
        for _ in range(len(comp_sides)):
            t, s = cur
            to_c = side_other_end(s, from_c)
            order.append((t, s, from_c, to_c))
            vert = self.vertices[self._vertex_of[(t, to_c)]]
            first, last = vert.corners[0], vert.corners[-1]
            enter = (first[0], self._corner_info[first][2])
            leave = (last[0], self._corner_info[last][3])
            if cur == enter:
                cur, from_c = leave, last[1]
            else:
                cur, from_c = enter, first[1]
            if cur == start:
                break
        return order

    def components(self):
        """Connected components as sorted lists of triangle ids."""
        uf = _UnionFind()
        for t in self._tris:
            uf.find(t)
        for (t, s), (t2, _, _) in self._glue.items():
            uf.union(t, t2)
        comps = {}
        for t in sorted(self._tris):
            comps.setdefault(uf.find(t), []).append(t)
        return sorted(comps.values())

    def is_orientable(self):
        return self._orientation_signs() is not None

    def _orientation_signs(self):
        signs = {}
        for root in sorted(self._tris):
            if root in signs:
                continue
            signs[root] = 1
            stack = [root]
            while stack:
                t = stack.pop()
                for s in range(3):
                    p = self._glue.get((t, s))
                    if p is None:
                        continue
                    t2, _, rev = p
                    want = -signs[t] if rev else signs[t]
                    if t2 in signs:
                        if signs[t2] != want:
                            return None
                    else:
                        signs[t2] = want
                        stack.append(t2)
        return signs

    def topology(self):
        if self._topology is None:
            V = len(self.vertices)
            E = len(self._glue) // 2 + len(self.boundary_sides())
            F = len(self._tris)
            chi = V - E + F
            b = len(self.boundary_components())
            orientable = self.is_orientable()
            ncomp = len(self.components())
            if orientable:
                genus = (2 * ncomp - chi - b) // 2
            else:
                genus = 2 * ncomp - chi - b
            self._topology = TopologySummary(chi, orientable, b, genus, V, E, F, ncomp)
        return self._topology

    def __repr__(self):
        return (f"Surface(name={self.name!r}, triangles={len(self._tris)}, "
                f"vertices={len(self.vertices)}, labels={sorted(self.labels)})")


# ----------------------------------------------------------------------
# module-level API


def _as_side(x):
    if isinstance(x, str):
        t, s = x.split(".")
        return (int(t), int(s))
    return (x[0], int(x[1]))


def build_surface(triangles, gluings, label_hints=(), *, tol=DEFAULT_TOL, name=None):
    """Glue triangles into a labeled surface.

    ``triangles`` is a mapping id -> three corners or an iterable of
    :class:`Triangle`; ``gluings`` holds :class:`Gluing` records or
    ``((t, s), (t, s), reversed)`` tuples; ``label_hints`` are (triangle,
    corner) pairs naming extra labeled vertex classes.
    """
    if isinstance(triangles, dict):
        tris = dict(triangles)
    else:
        tris = {tr[0]: tr[1] for tr in triangles}
    glue = {}
    for rec in gluings:
        a, b = _as_side(rec[0]), _as_side(rec[1])
        rev = bool(rec[2]) if len(rec) > 2 else False
        for side in (a, b):
            if side[0] not in tris or side[1] not in (0, 1, 2):
                raise DanglingGluing(f"gluing references missing side {side[0]}.{side[1]}")
            if side in glue:
                raise DanglingGluing(f"side {side[0]}.{side[1]} appears in two gluings")
        if a == b:
            raise DanglingGluing(f"side {a[0]}.{a[1]} is glued to itself")
        glue[a] = (b[0], b[1], rev)
        glue[b] = (a[0], a[1], rev)
    for c in label_hints:
        if (c[0], c[1]) not in {(t, k) for t in tris for k in range(3)}:
            raise UnknownVertex(f"label hint {c} names no corner")
    hints = [(c[0], c[1]) for c in label_hints]
    return Surface(tris, glue, hints, tol=tol, name=name)


def cone_angle(surface, vertex):
    """Total angle around a vertex class."""
    return surface.vertex(vertex).angle


def curvature(surface, vertex):
    v = surface.vertex(vertex)
    return (math.pi if v.on_boundary else TWO_PI) - v.angle


def gauss_bonnet_check(surface):
    """Residual of the discrete Gauss-Bonnet identity (sum of curvatures - 2 pi chi)."""
    total = math.fsum(curvature(surface, v.id) for v in surface.vertices)
    return total - TWO_PI * surface.topology().euler_characteristic


def topology(surface):
    return surface.topology()


def singular_vertices(surface):
    return [v.id for v in surface.vertices if v.singular]
