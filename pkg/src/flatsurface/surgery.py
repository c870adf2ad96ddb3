"""Refinement, path embedding, cutting and regluing.

Child triangles always keep their parent's chart coordinates, so a point or
direction expressed in an ancestor's chart stays valid in every descendant.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import _geom as g
from .errors import ChainNotGeodesic, DegenerateSplit, NotSimple, SeamMismatch
from .geodesics import Arc, MultiArc, chart_to_developed, develop_across
from .surface import glued_corner, side_other_end


class _Mesh:
    """Mutable triangle soup used while performing surgery."""

    def __init__(self, surface):
        self.surface = surface
        self.tris = dict(surface.triangles)
        self.glue = dict(surface.gluings)
        self.origin = dict(surface.origin)
        self.base = {t: t for t in self.tris}
        self.tags = dict(surface.side_tags)
        self.labeled = set(surface.labeled_corners)
        self.moves = {}
        self.chain = []
        self.next_id = max(self.tris) + 1 if self.tris else 0
        self.tol = surface.clearance()

    def _new_id(self):
        t = self.next_id
        self.next_id += 1
        return t

    def chase(self, side):
        while side in self.moves:
            side = self.moves[side]
        return side

    def _repoint(self, t, sides, mapping):
        """Move gluings of ``sides`` of t to their images under ``mapping``."""
        popped = []
        for x in sides:
            p = self.glue.pop((t, x), None)
            if p is not None:
                self.glue.pop((p[0], p[1]), None)
                popped.append(((t, x), p))
        for key, (t2, s2, rev) in popped:
            a = mapping.get(key, key)
            b = mapping.get((t2, s2), (t2, s2))
            self.glue[a] = (b[0], b[1], rev)
            self.glue[b] = (a[0], a[1], rev)

    def _inherit(self, t, corner_map, tag_map, mapping):
        for c, targets in corner_map.items():
            if (t, c) in self.labeled:
                self.labeled.discard((t, c))
                self.labeled.update(targets)
        for x, targets in tag_map.items():
            tag = self.tags.pop((t, x), None)
            if tag is not None:
                for side in targets:
                    self.tags[side] = tag
        self.moves.update(mapping)
        org, base = self.origin.pop(t), self.base.pop(t)
        return org, base

    def _split_one(self, t, s, lam):
        C = self.tris[t]
        s1, s2 = (s + 1) % 3, (s + 2) % 3
        Y = g.add(C[s], g.scale(g.sub(C[s1], C[s]), lam))
        a, b = self._new_id(), self._new_id()
        mapping = {(t, s): (a, 0), (t, s1): (b, 1), (t, s2): (a, 2)}
        self._repoint(t, (s1, s2), mapping)
        del self.tris[t]
        self.tris[a] = (C[s], Y, C[s2])
        self.tris[b] = (Y, C[s1], C[s2])
        org, base = self._inherit(
            t,
            {s: [(a, 0)], s1: [(b, 1)], s2: [(a, 2), (b, 2)]},
            {s: [(a, 0), (b, 0)], s1: [(b, 1)], s2: [(a, 2)]},
            mapping,
        )
        for n in (a, b):
            self.origin[n], self.base[n] = org, base
        self.glue[(a, 1)] = (b, 2, False)
        self.glue[(b, 2)] = (a, 1, False)
        return a, b

    def split_edge(self, t, s, lam, label=False):
        """Insert a vertex on side (t, s) at parameter lam; returns the side images.

        The result maps 'near' to the side from corner s+2 to the new vertex.
        """
        length = g.norm(g.sub(self.tris[t][(s + 1) % 3], self.tris[t][s]))
        if min(lam, 1.0 - lam) * length <= self.tol:
            raise DegenerateSplit(f"split of {t}.{s} at {lam:.3g} is too close to a vertex")
        chain_sides = {c[0] for c in self.chain}
        p = self.glue.pop((t, s), None)
        if (t, s) in chain_sides or (p is not None and (p[0], p[1]) in chain_sides):
            raise NotSimple("path crosses itself")
        if p is not None:
            self.glue.pop((p[0], p[1]), None)
        a, b = self._split_one(t, s, lam)
        new_corners = [(a, 1), (b, 0)]
        if p is not None:
            t2, s2, rev = p
            t2, s2 = self.chase((t2, s2))
            lam2 = lam if rev else 1.0 - lam
            ua, ub = self._split_one(t2, s2, lam2)
            h1, h2 = self.chase((a, 0)), self.chase((b, 0))
            if rev:
                pairs = ((h1, (ua, 0)), (h2, (ub, 0)))
            else:
                pairs = ((h1, (ub, 0)), (h2, (ua, 0)))
            for x, y in pairs:
                self.glue[x] = (y[0], y[1], rev)
                self.glue[y] = (x[0], x[1], rev)
            new_corners += [(ua, 1), (ub, 0)]
        if label:
            self.labeled.update(self.chase(c) for c in new_corners)
        self.chain = [(self.chase(side), fw) for side, fw in self.chain]
        return self.chase((b, 2))

    def split_interior(self, t, P, label=False):
        C = self.tris[t]
        n = [self._new_id() for _ in range(3)]
        mapping = {(t, i): (n[i], 0) for i in range(3)}
        self._repoint(t, (0, 1, 2), mapping)
        del self.tris[t]
        for i in range(3):
            self.tris[n[i]] = (C[i], C[(i + 1) % 3], P)
        org, base = self._inherit(
            t,
            {i: [(n[i], 0), (n[(i - 1) % 3], 1)] for i in range(3)},
            {i: [(n[i], 0)] for i in range(3)},
            mapping,
        )
        for i in range(3):
            self.origin[n[i]], self.base[n[i]] = org, base
            j = (i + 1) % 3
            self.glue[(n[i], 1)] = (n[j], 2, False)
            self.glue[(n[j], 2)] = (n[i], 1, False)
        if label:
            self.labeled.update((x, 2) for x in n)
        self.chain = [(self.chase(side), fw) for side, fw in self.chain]
        return n

    def freeze(self, require_labels=True, gluings=None):
        return self.surface._derive(self.tris, self.glue if gluings is None else gluings,
                                    self.labeled, self.origin, self.tags, require_labels)

    # -- walking ---------------------------------------------------------

    def cross_map(self, t, x):
        t2, s2, rev = self.glue[(t, x)]
        C = self.tris[t]
        D2 = develop_across(self.tris, C, x, t2, s2, rev)
        return g.invert(chart_to_developed(self.tris[t2], D2, 0))

    def contains(self, t, k, d):
        C = self.tris[t]
        A = g.unit(g.sub(C[(k + 1) % 3], C[k]))
        B = g.unit(g.sub(C[(k + 2) % 3], C[k]))
        return g.cross(A, d) >= -1e-12 and g.cross(d, B) >= -1e-12 and g.dot(d, g.add(A, B)) > 0.0

    def locate(self, t, k, d):
        """Corner at the vertex of (t, k) containing direction d (given in t's chart)."""
        limit = 3 * len(self.tris) + 3
        for first in (k, (k + 2) % 3):
            cu, ck, dd, side = t, k, d, first
            for _ in range(limit):
                if self.contains(cu, ck, dd):
                    return cu, ck, dd
                if (cu, side) not in self.glue:
                    break
                m = self.cross_map(cu, side)
                t2, s2, _ = self.glue[(cu, side)]
                ck = glued_corner(self.glue, cu, side, ck)[1]
                dd = g.unit(g.apply(m, dd))
                cu = t2
                side = ck if s2 != ck else (ck + 2) % 3
        raise ChainNotGeodesic("direction does not leave the vertex into any corner")

    def start_corner(self, t0, c0, d):
        P = self.surface.corners(t0)[c0]
        for t in sorted(self.tris):
            if self.base[t] != t0:
                continue
            C = self.tris[t]
            for k in range(3):
                if g.norm(g.sub(C[k], P)) <= self.tol:
                    return self.locate(t, k, d)
        raise ChainNotGeodesic(f"start corner {t0}.{c0} not found")

    def walk(self, t, k, d, length):
        """Embed a straight segment; appends oriented sides to ``self.chain``.

        Returns the corner reached.
        """
        tol = self.tol
        r = length
        start = len(self.chain)
        while r > tol:
            t, k, d = self.locate(t, k, d)
            C = self.tris[t]
            P = C[k]
            moved = False
            for j, side, fw in (((k + 1) % 3, k, True), ((k + 2) % 3, (k + 2) % 3, False)):
                rel = g.sub(C[j], P)
                if g.dot(rel, d) > 0.0 and abs(g.cross(d, rel)) <= tol:
                    dist = g.norm(rel)
                    if dist > r + tol:
                        raise ChainNotGeodesic("path ends in the middle of an edge")
                    self._push(t, side, fw, start)
                    r -= dist
                    k = j
                    moved = True
                    break
            if moved:
                continue
            A, B = C[(k + 1) % 3], C[(k + 2) % 3]
            BA = g.sub(B, A)
            den = g.cross(d, BA)
            h = g.cross(g.sub(A, P), BA) / den
            lam = -g.cross(g.sub(A, P), d) / g.cross(BA, d)
            if h >= r - tol:
                raise ChainNotGeodesic("path ends inside a triangle")
            near = self.split_edge(t, (k + 1) % 3, lam)
            self._push(near[0], near[1], True, start)
            r -= h
            t, k = near[0], (near[1] + 1) % 3
        return t, k

    def _push(self, t, side, fw, start):
        entry = ((t, side), fw)
        other = self.glue.get((t, side))
        mine = {c[0] for c in self.chain[start:]}
        if (t, side) in mine or (other is not None and (other[0], other[1]) in mine):
            raise NotSimple("path runs along itself")
        self.chain.append(entry)


@dataclass
class EmbeddedPath:
    surface: object  # refined surface, all gluings intact
    chains: tuple  # per input path: tuple of ((t, s), forward)

    @property
    def chain(self):
        return tuple(x for c in self.chains for x in c)


@dataclass
class CutRecord:
    parent: object
    refined: object
    chains: tuple
    cut: object  # the cut surface (all components together)
    children: list
    seam_pairs: list  # [((t, s), (t2, s2), reversed)]
    new_labels: tuple = ()
    tags: tuple = ()


def _segments(path):
    if isinstance(path, Arc):
        return [path]
    if isinstance(path, MultiArc):
        return list(path.segments)
    if hasattr(path, "multiarc"):
        return list(path.multiarc.segments)
    return list(path)


def _embed(surface, paths):
    mesh = _Mesh(surface)
    chains = []
    for path in paths:
        begin = len(mesh.chain)
        for arc in _segments(path):
            t0, c0 = arc.start_corner
            d = g.unit(arc.vector)
            t, k, d = mesh.start_corner(t0, c0, d)
            mesh.walk(t, k, d, arc.length)
        chains.append(begin)
    ends = chains[1:] + [len(mesh.chain)]
    return mesh, [tuple(mesh.chain[b:e]) for b, e in zip(chains, ends)]


def embed_path(surface, path):
    """Make a path of arcs (or several paths) a chain of mesh sides."""
    paths = path if isinstance(path, (list, tuple)) and path and not isinstance(path[0], Arc) else [path]
    mesh, chains = _embed(surface, paths)
    return EmbeddedPath(mesh.freeze(), tuple(chains))


def cut_along(surface, path, tags=None):
    """Cut a surface open along one path or a list of paths.

    ``tags`` (one per path) are attached to both copies of each seam side.
    """
    paths = path if isinstance(path, list) else [path]
    mesh, chains = _embed(surface, paths)
    refined = mesh.freeze()
    if tags is None:
        tags = [("cut", i) for i in range(len(paths))]
    seam = []
    for chain, tag in zip(chains, tags):
        for (t, s), _ in chain:
            p = mesh.glue.pop((t, s), None)
            mesh.tags[(t, s)] = tag
            if p is None:
                continue
            mesh.glue.pop((p[0], p[1]), None)
            mesh.tags[(p[0], p[1])] = tag
            seam.append(((t, s), (p[0], p[1]), p[2]))
    cut = mesh.freeze(require_labels=False)
    children = [_restrict(cut, comp) for comp in cut.components()]
    return CutRecord(surface, refined, tuple(chains), cut, children, seam, (), tuple(tags))


def _restrict(surface, tri_ids):
    keep = set(tri_ids)
    tris = {t: surface.triangles[t] for t in tri_ids}
    glue = {k: v for k, v in surface.gluings.items() if k[0] in keep}
    labeled = {c for c in surface.labeled_corners if c[0] in keep}
    origin = {t: surface.origin[t] for t in tri_ids}
    tags = {k: v for k, v in surface.side_tags.items() if k[0] in keep}
    return surface._derive(tris, glue, labeled, origin, tags, require_labels=False)


def reglue(record):
    """Glue the children of a cut back along the recorded seam."""
    tris, glue, labeled, origin, tags = {}, {}, set(), {}, {}
    for ch in record.children:
        tris.update(ch.triangles)
        glue.update(ch.gluings)
        labeled.update(ch.labeled_corners)
        origin.update(ch.origin)
        tags.update(ch.side_tags)
    base = record.children[0]
    eps = base.tol.eps_len
    for a, b, rev in record.seam_pairs:
        la = g.norm(g.sub(tris[a[0]][(a[1] + 1) % 3], tris[a[0]][a[1]]))
        lb = g.norm(g.sub(tris[b[0]][(b[1] + 1) % 3], tris[b[0]][b[1]]))
        if abs(la - lb) > eps * max(1.0, la):
            raise SeamMismatch(f"seam sides {a} and {b} differ in length")
        glue[a] = (b[0], b[1], rev)
        glue[b] = (a[0], a[1], rev)
        tags.pop(a, None)
        tags.pop(b, None)
    return record.parent._derive(tris, glue, labeled, origin, tags)


def refine_at_point(surface, t, bary, label=True):
    """Insert a vertex at barycentric position ``bary`` of triangle t.

    Returns (new surface, vertex id of the point).
    """
    w = [float(x) for x in bary]
    total = math.fsum(w)
    w = [x / total for x in w]
    C = surface.corners(t)
    P = (math.fsum(w[i] * C[i][0] for i in range(3)), math.fsum(w[i] * C[i][1] for i in range(3)))
    mesh = _Mesh(surface)
    tol = surface.clearance()
    near = [i for i in range(3) if g.norm(g.sub(P, C[i])) <= tol]
    if near:
        corner = (t, near[0])
        if label:
            vid = surface.vertex_at(*corner)
            mesh.labeled.update(surface.vertex(vid).corners)
        new = mesh.freeze()
        return new, new.vertex_at(*corner)
    for i in range(3):
        s = (i + 1) % 3
        a, b = C[s], C[(s + 1) % 3]
        if g.segment_distance(P, a, b) <= tol:
            lam = g.norm(g.sub(P, a)) / g.norm(g.sub(b, a))
            side = mesh.split_edge(t, s, lam, label=label)
            new = mesh.freeze()
            return new, new.vertex_at(side[0], (side[1] + 1) % 3)
    n = mesh.split_interior(t, P, label=label)
    new = mesh.freeze()
    return new, new.vertex_at(n[0], 2)


def barycentric_refine(surface):
    """Split every triangle at its centroid (new vertices unlabeled)."""
    mesh = _Mesh(surface)
    for t in sorted(surface.triangles):
        C = mesh.tris[t]
        P = ((C[0][0] + C[1][0] + C[2][0]) / 3.0, (C[0][1] + C[1][1] + C[2][1]) / 3.0)
        mesh.split_interior(t, P)
    return mesh.freeze()


def _is_disk(s):
    topo = s.topology()
    return topo.euler_characteristic == 1 and topo.boundary_components == 1 and topo.orientable


def _boundary_length(s, sides):
    return math.fsum(s.side_length(t, x) for t, x in sides)


def classify_by_cut(surface, path):
    """'null', 'boundary_parallel' or 'essential' for a simple closed path."""
    rec = cut_along(surface, path, tags=[("loop",)])
    chain = rec.chains[0]
    refined = rec.refined
    if all(refined.is_boundary_side(*side) for side, _ in chain):
        return "boundary_parallel"
    tol = 1e-7 * max(1.0, surface.diameter())
    loop_length = math.fsum(a.length for a in _segments(path))
    orig_lengths = [_boundary_length(surface, c["sides"]) for c in surface.boundary_components()]
    for piece in rec.children:
        comps = piece.boundary_components()
        seam_only = [all(piece.side_tags.get(s) == ("loop",) for s in c["sides"]) for c in comps]
        orig_only = [all(piece.side_tags.get(s) != ("loop",) for s in c["sides"]) for c in comps]
        topo = piece.topology()
        if _is_disk(piece) and seam_only and seam_only[0]:
            return "null"
        if _is_disk(piece) and comps:
            sides = comps[0]["sides"]
            orig = [s for s in sides if piece.side_tags.get(s) != ("loop",)]
            seam = [s for s in sides if piece.side_tags.get(s) == ("loop",)]
            if orig and seam:
                ol = _boundary_length(piece, orig)
                one_copy = abs(_boundary_length(piece, seam) - loop_length) <= tol
                if one_copy and any(abs(ol - L) <= tol for L in orig_lengths):
                    return "boundary_parallel"
        if (topo.orientable and topo.euler_characteristic == 0 and topo.boundary_components == 2
                and sorted(seam_only) == [False, True] and sorted(orig_only) == [False, True]):
            return "boundary_parallel"
    return "essential"
