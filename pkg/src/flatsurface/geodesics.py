"""Geodesics between labeled points found by developing triangle strips.

Every search starts in one corner wedge of a labeled vertex, lays the corner's
triangle out with the vertex at the origin and pushes an angular sector of
still-visible directions across glued sides.  A vertex image inside the
sector ends the rays through it: at a labeled vertex an arc is emitted, at an
unlabeled flat vertex the ray is continued straight through the vertex star.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Optional

from . import _geom as g
from .errors import NoArcExists, NoEssentialLoop, NotSimple, SearchBudgetExceeded, UnknownVertex
from .surface import TWO_PI, glued_corner, side_other_end

DEFAULT_BUDGET = 1_000_000
ANG_EPS = 1e-13


@dataclass(frozen=True)
class CrossingSequence:
    start: tuple  # (vertex, (triangle, corner))
    crossings: tuple  # ((triangle, entry side, exit side), ...), -1 where absent
    end: tuple  # (vertex, (triangle, corner))

    def reversed(self):
        return CrossingSequence(self.end, tuple((t, ex, en) for t, en, ex in reversed(self.crossings)),
                                self.start)

    def key(self):
        return (self.start[1], self.crossings, self.end[1])


@dataclass(frozen=True)
class Arc:
    crossing: CrossingSequence
    vector: tuple  # developed vector in the start triangle's chart
    end_vector: tuple  # vector back toward the start, in the end triangle's chart
    length: float
    start_angle: float  # angular position of the departure at the start vertex
    end_angle: float  # angular position of the arrival direction at the end vertex

    @property
    def start(self):
        return self.crossing.start[0]

    @property
    def end(self):
        return self.crossing.end[0]

    @property
    def start_corner(self):
        return self.crossing.start[1]

    @property
    def end_corner(self):
        return self.crossing.end[1]

    def reversed(self):
        return Arc(self.crossing.reversed(), self.end_vector, self.vector, self.length,
                   self.end_angle, self.start_angle)

    def sort_key(self):
        return (round(self.length, 9), self.crossing.key())

    def canonical(self):
        """The orientation of this unoriented arc with the smaller key."""
        r = self.reversed()
        mine = (self.start, self.start_angle)
        theirs = (r.start, r.start_angle)
        return self if mine <= theirs else r


@dataclass(frozen=True)
class MultiArc:
    segments: tuple  # oriented Arcs, end of one = start of the next
    junction_angles: tuple = ()  # (left, right) per interior junction; boundary: (angle, None)

    @property
    def length(self):
        return math.fsum(a.length for a in self.segments)

    @property
    def start(self):
        return self.segments[0].start

    @property
    def end(self):
        return self.segments[-1].end

    def vertices(self):
        return [self.segments[0].start] + [a.end for a in self.segments]


@dataclass(frozen=True)
class GeodesicLoop:
    multiarc: MultiArc
    simple: bool
    homotopy_class_tag: Optional[str] = None

    @property
    def length(self):
        return self.multiarc.length

    @property
    def base(self):
        return self.multiarc.start


@dataclass
class SpectrumResult:
    bound: float
    lengths: list  # [(length, multiplicity)]
    witnesses: list = field(default_factory=list)  # Arcs grouped in the same order

    def as_multiset(self):
        return [l for l, m in self.lengths for _ in range(m)]


# ----------------------------------------------------------------------
# development


def develop_across(tris, D, side, t2, s2, rev):
    """Developed corners of triangle t2 glued to ``side`` of a laid-out triangle D."""
    C = tris[t2]
    a, b = D[side], D[(side + 1) % 3]
    if rev:
        img0, img1 = a, b
    else:
        img0, img1 = b, a
    i0, i1, i2 = s2, (s2 + 1) % 3, (s2 + 2) % 3
    third = g.place_third(img0, img1, C[i0], C[i1], C[i2], D[(side + 2) % 3])
    out = [None, None, None]
    out[i0], out[i1], out[i2] = img0, img1, third
    return tuple(out)


def chart_to_developed(C, D, k):
    """Linear part of the isometry taking chart C to the developed layout D."""
    return g.linear_map(g.sub(C[(k + 1) % 3], C[k]), g.sub(C[(k + 2) % 3], C[k]),
                        g.sub(D[(k + 1) % 3], D[k]), g.sub(D[(k + 2) % 3], D[k]))


def glue_linear(surface, t, s):
    """Linear map carrying directions in t's chart to the chart across side s."""
    t2, s2, rev = surface.partner(t, s)
    C = surface.corners(t)
    D2 = develop_across(surface.triangles, C, s, t2, s2, rev)
    # D2 is t2 laid out in t's chart; invert to go from t's chart into t2's
    m = chart_to_developed(surface.corners(t2), D2, 0)
    return g.invert(m)


class _Search:
    """One bounded exploration; instantiate per surface and bound."""

    def __init__(self, surface, limit, budget=DEFAULT_BUDGET, on_arc=None):
        self.s = surface
        self.tris = surface.triangles
        self.glue = surface.gluings
        self.limit = limit
        self.budget = budget
        self.tol = surface.clearance()
        self.len_tol = max(surface.tol.eps_len, self.tol)
        self.labels = surface.labels
        self.on_arc = on_arc
        self.count = 0
        self.flip = False
        self.wedge_offset = 0.0
        self.wedge_ray = None
        self.source = None
        self.source_corner = None
        self.stack = []

    # -- wedges ---------------------------------------------------------

    def run_vertex(self, vid):
        vert = self.s.vertex(vid)
        n = len(vert.corners)
        for i, corner in enumerate(vert.corners):
            last_closed = vert.on_boundary and i == n - 1
            self.run_wedge(corner, None, last_closed)

    def run_wedge(self, corner, direction=None, hi_closed=False):
        """Explore one corner wedge, or a single ray when ``direction`` is given."""
        t, c = corner
        vid, off, entry, exit_side = self.s.corner_info(t, c)
        C = self.tris[t]
        o = C[c]
        D = tuple(g.sub(p, o) for p in C)
        ia = side_other_end(entry, c)
        ib = side_other_end(exit_side, c)
        self.flip = g.cross(D[ia], D[ib]) < 0.0
        if self.flip:
            D = tuple((-p[0], p[1]) for p in D)
        self.count = 0
        self.source = vid
        self.source_corner = corner
        self.wedge_offset = off
        self.wedge_ray = D[ia]
        root = (None, t, -1, -1)
        if direction is None:
            lo, hi, loc, hic = D[ia], D[ib], True, hi_closed
        else:
            d = (-direction[0], direction[1]) if self.flip else direction
            lo = hi = d
            loc = hic = True
        self._start_corner(t, c, D, lo, loc, hi, hic, root)
        self._drain()

    def _start_corner(self, t, c, D, lo, loc, hi, hic, link, origin=(0.0, 0.0)):
        for k in ((c + 1) % 3, (c + 2) % 3):
            P = D[k]
            if self._on_ray(lo, P, origin) and loc or self._on_ray(hi, P, origin) and hic:
                self._hit(t, k, D, link)
        self._child(t, (c + 1) % 3, D, lo, loc, hi, hic, link)

    def _on_ray(self, d, P, origin):
        rel = g.sub(P, origin)
        if g.dot(rel, d) <= 0.0:
            return False
        return abs(g.cross(g.unit(d), P)) <= self.tol

    def _drain(self):
        stack = self.stack
        while stack:
            self._node(*stack.pop())

    def _child(self, t, x, D, lo, loc, hi, hic, link):
        p = self.glue.get((t, x))
        if p is None:
            return
        Q0, Q1 = D[x], D[(x + 1) % 3]
        if g.cross(Q0, Q1) > 0.0:
            R, Lf = Q0, Q1
        else:
            R, Lf = Q1, Q0
        tol = self.tol
        lo_u = g.unit(lo)
        if g.cross(lo_u, R) >= -tol:
            lo, loc = R, False
            lo_u = g.unit(R)
        hi_u = g.unit(hi)
        if g.cross(hi_u, Lf) <= tol:
            hi, hic = Lf, False
            hi_u = g.unit(Lf)
        width = g.cross(lo_u, hi_u) * max(g.norm(Q0), g.norm(Q1))
        if width < -tol:
            return
        if abs(width) <= tol and not (loc and hic):
            return
        if g.segment_distance((0.0, 0.0), Q0, Q1) > self.limit + self.len_tol:
            return
        t2, s2, rev = p
        D2 = develop_across(self.tris, D, x, t2, s2, rev)
        self.stack.append((t2, D2, s2, lo, loc, hi, hic, (link, t2, s2, x)))

    def _node(self, t, D, s, lo, loc, hi, hic, link):
        self.count += 1
        if self.count > self.budget:
            raise SearchBudgetExceeded(self.budget)
        a = (s + 2) % 3
        V = D[a]
        P0, P1 = D[s], D[(s + 1) % 3]
        r = s if g.cross(P0, P1) > 0.0 else (s + 1) % 3
        side_rv = (s + 2) % 3 if r == s else (s + 1) % 3
        side_vl = (s + 1) % 3 if side_rv == (s + 2) % 3 else (s + 2) % 3
        tol = self.tol
        s1 = g.cross(g.unit(lo), V)
        s2 = g.cross(V, g.unit(hi))
        on_lo = abs(s1) <= tol
        on_hi = abs(s2) <= tol
        inside = s1 > tol and s2 > tol
        if inside or (on_lo and loc) or (on_hi and hic):
            self._hit(t, a, D, link)
            if not on_lo:
                self._child(t, side_rv, D, lo, loc, V, False, link)
            if not on_hi:
                self._child(t, side_vl, D, V, False, hi, hic, link)
        elif s1 < -tol or on_lo:
            self._child(t, side_vl, D, lo, loc, hi, hic, link)
        else:
            self._child(t, side_rv, D, lo, loc, hi, hic, link)

    # -- vertices -------------------------------------------------------

    def _hit(self, t, k, D, link):
        V = D[k]
        dist = g.norm(V)
        if dist > self.limit + self.len_tol:
            return
        vid = self.s.vertex_at(t, k)
        if vid in self.labels:
            self._emit(t, k, D, link, vid, dist)
        elif dist < self.limit - self.len_tol:
            self._pass_through(t, k, D, link, vid)

    def _pass_through(self, t, k, D, link, vid):
        V = D[k]
        d = g.unit(V)
        vert = self.s.vertex(vid)
        for first in (k, (k + 2) % 3):
            found = self._walk_star(t, k, D, first, d, link, len(vert.corners))
            if found is not None:
                t2, k2, D2, link2 = found
                self._start_corner(t2, k2, D2, d, True, d, True, link2, origin=V)
                return

    def _walk_star(self, t, k, D, side, d, link, ncorners):
        V = D[k]
        swept = g.angle_between(g.scale(d, -1.0), g.sub(D[side_other_end(side, k)], V))
        cur_t, cur_k, cur_D = t, k, D
        for _ in range(ncorners):
            p = self.glue.get((cur_t, side))
            if p is None:
                return None
            t2, s2, rev = p
            D2 = develop_across(self.tris, cur_D, side, t2, s2, rev)
            k2 = glued_corner(self.glue, cur_t, side, cur_k)[1]
            link = (link, t2, s2, side)
            A = g.sub(D2[(k2 + 1) % 3], V)
            B = g.sub(D2[(k2 + 2) % 3], V)
            ang = g.angle_between(A, B)
            if swept + ang >= math.pi - 1e-9:
                if self._in_corner(A, B, d):
                    return (t2, k2, D2, link)
                return None
            swept += ang
            cur_t, cur_k, cur_D = t2, k2, D2
            side = k2 if s2 != k2 else (k2 + 2) % 3
        return None

    def _in_corner(self, A, B, d):
        sgn = 1.0 if g.cross(A, B) > 0.0 else -1.0
        return (sgn * g.cross(g.unit(A), d) >= -1e-9 and sgn * g.cross(d, g.unit(B)) >= -1e-9
                and g.dot(d, g.add(g.unit(A), g.unit(B))) > 0.0)

    def _wrap(self, vid, a):
        vert = self.s.vertex(vid)
        if vert.on_boundary:
            return a
        a = a % vert.angle
        return 0.0 if a >= vert.angle - 1e-12 else a

    def _emit(self, t, k, D, link, vid, dist):
        steps = []
        node = link
        while node is not None:
            parent, tt, entry, exit_prev = node
            steps.append((tt, entry, exit_prev))
            node = parent
        # rebuilding the chain is development work too
        self.count += len(steps)
        if self.count > self.budget:
            raise SearchBudgetExceeded(self.budget)
        steps.reverse()
        crossings = []
        for i, (tt, entry, _) in enumerate(steps):
            exit_side = steps[i + 1][2] if i + 1 < len(steps) else -1
            crossings.append((tt, entry, exit_side))
        X = D[k]
        start_angle = self._wrap(self.source, self.wedge_offset + g.angle_between(self.wedge_ray, X))
        _, off, entry, _ = self.s.corner_info(t, k)
        back = (-X[0], -X[1])
        ray0 = g.sub(D[side_other_end(entry, k)], X)
        end_angle = self._wrap(vid, off + g.angle_between(ray0, back))
        C = self.tris[t]
        m = chart_to_developed(C, D, k)
        end_vec = g.apply(g.invert(m), back)
        vec = (-X[0], X[1]) if self.flip else X
        arc = Arc(
            CrossingSequence((self.source, self.source_corner), tuple(crossings), (vid, (t, k))),
            vec, end_vec, dist, start_angle, end_angle,
        )
        self.on_arc(arc)


# ----------------------------------------------------------------------
# public operations


def _check_vertex(surface, v, labeled=True):
    vert = surface.vertex(v)
    if labeled and not vert.labeled:
        raise UnknownVertex(f"vertex {v} is not labeled")
    return vert


def _keep_loop(arc, theta, tol):
    return arc.start_angle < arc.end_angle - tol


def enumerate_arcs(surface, L, source=None, target=None, *, budget=DEFAULT_BUDGET):
    """All unoriented arcs of length <= L, optionally restricted to endpoints.

    When ``source`` is given the arcs are oriented away from it.
    """
    if not L > 0:
        raise ValueError("length bound must be positive")
    if source is not None:
        _check_vertex(surface, source)
    if target is not None:
        _check_vertex(surface, target)
    found = []
    ang_tol = 1e-9

    if source is None and target is None:
        sources = sorted(surface.labels)

        def accept(arc):
            if arc.start < arc.end:
                found.append(arc)
            elif arc.start == arc.end and _keep_loop(arc, None, ang_tol):
                found.append(arc)
    else:
        sources = [source if source is not None else target]
        other = target if source is not None else None

        def accept(arc):
            if other is not None and arc.end != other:
                return
            if arc.start == arc.end and not _keep_loop(arc, None, ang_tol):
                return
            found.append(arc)

    search = _Search(surface, L, budget, accept)
    for v in sources:
        search.run_vertex(v)
    found.sort(key=Arc.sort_key)
    return found


def trace_ray(surface, corner, direction, length, *, budget=DEFAULT_BUDGET):
    """Follow a straight ray from a corner until it reaches a labeled vertex.

    Returns the Arc when that happens within ``length`` (plus tolerance),
    otherwise None.
    """
    hits = []
    search = _Search(surface, length, budget, hits.append)
    search.run_wedge(tuple(corner), tuple(direction))
    hits.sort(key=lambda a: a.length)
    return hits[0] if hits else None


def redevelop(surface, arc):
    """Lay the arc's triangle chain out again in the start chart.

    Returns the developed triangles [(t, D)] or raises ValueError on an
    inconsistent chain.
    """
    tris = surface.triangles
    t0, c0 = arc.start_corner
    C = tris[t0]
    D = tuple(g.sub(p, C[c0]) for p in C)
    out = [(t0, D)]
    for (t, entry, exit_side), (t2, entry2, _) in zip(arc.crossing.crossings, arc.crossing.crossings[1:]):
        p = surface.partner(t, exit_side)
        if p is None or p[:2] != (t2, entry2):
            raise ValueError(f"chain step {t}.{exit_side} -> {t2}.{entry2} is not a gluing")
        D = develop_across(tris, D, exit_side, t2, entry2, p[2])
        out.append((t2, D))
    return out


def validate_arc(surface, arc):
    """Re-develop an arc and check its vector and clearance; returns list of problems."""
    problems = []
    try:
        chain = redevelop(surface, arc)
    except ValueError as exc:
        return [str(exc)]
    tol = surface.clearance()
    t_end, k_end = arc.end_corner
    if chain[-1][0] != t_end:
        problems.append("chain does not end in the end triangle")
        return problems
    X = chain[-1][1][k_end]
    if g.norm(g.sub(X, arc.vector)) > 1e-9 * max(1.0, arc.length):
        problems.append(f"developed end {X} differs from stored vector {arc.vector}")
    if abs(g.norm(X) - arc.length) > 1e-9 * max(1.0, arc.length):
        problems.append("length mismatch")
    origin = (0.0, 0.0)
    for t, D in chain:
        for k in range(3):
            P = D[k]
            if g.norm(P) <= tol or g.norm(g.sub(P, X)) <= tol:
                continue
            if g.segment_distance(P, origin, X) <= tol:
                vid = surface.vertex_at(t, k)
                if vid in surface.labels:
                    problems.append(f"segment passes through labeled vertex {vid}")
                elif surface.vertex(vid).singular:
                    problems.append(f"segment passes through singular vertex {vid}")
        if _segment_triangle_gap(origin, X, D) > tol:
            problems.append(f"segment misses chain triangle {t}")
    return problems


def _segment_triangle_gap(a, b, D):
    clipped = _clip_to_triangle(a, b, D, 0.0)
    if clipped is not None:
        return 0.0
    best = min(g.segment_distance(P, a, b) for P in D)
    for i in range(3):
        best = min(best, g.segment_distance(a, D[i], D[(i + 1) % 3]),
                   g.segment_distance(b, D[i], D[(i + 1) % 3]))
    return best


def _clip_to_triangle(a, b, D, tol):
    """Parameter interval of segment ab inside triangle D (grown by tol)."""
    t0, t1 = 0.0, 1.0
    orient = 1.0 if g.signed_area(*D) > 0 else -1.0
    ab = g.sub(b, a)
    for i in range(3):
        p, q = D[i], D[(i + 1) % 3]
        e = g.sub(q, p)
        le = g.norm(e)
        # signed distance of a point x from edge, positive inside
        fa = orient * g.cross(e, g.sub(a, p)) / le + tol
        fd = orient * g.cross(e, ab) / le
        if abs(fd) < 1e-300:
            if fa < 0.0:
                return None
            continue
        tt = -fa / fd
        if fd > 0.0:
            t0 = max(t0, tt)
        else:
            t1 = min(t1, tt)
        if t0 > t1:
            return None
    return (t0, t1)


def arc_pieces(surface, arc, offset=0.0):
    """Per-triangle pieces of an arc in chart coordinates.

    Each piece is (triangle, p0, p1, u0, u1) with arc-length parameters
    shifted by ``offset``.
    """
    tris = surface.triangles
    chain = redevelop(surface, arc)
    X = chain[-1][1][arc.end_corner[1]]
    length = g.norm(X)
    origin = (0.0, 0.0)
    tol = surface.clearance()
    pieces = []
    for t, D in chain:
        iv = _clip_to_triangle(origin, X, D, tol)
        if iv is None or (iv[1] - iv[0]) * length <= tol:
            continue
        C = tris[t]
        m_inv = g.invert(chart_to_developed(C, D, 0))
        p0 = g.add(g.scale(X, iv[0]), (0.0, 0.0))
        p1 = g.scale(X, iv[1])
        c0 = g.add(C[0], g.apply(m_inv, g.sub(p0, D[0])))
        c1 = g.add(C[0], g.apply(m_inv, g.sub(p1, D[0])))
        pieces.append((t, c0, c1, offset + iv[0] * length, offset + iv[1] * length))
    return pieces


def _pieces_conflicts(pa, pb, tol, same, len_a, len_b, ignore_params=()):
    by_t = {}
    for p in pb:
        by_t.setdefault(p[0], []).append(p)
    for i, (t, a0, a1, u0, u1) in enumerate(pa):
        for j, (_, b0, b1, v0, v1) in enumerate(by_t.get(t, ())):
            hit = g.segments_intersect(a0, a1, b0, b1, tol)
            if hit is None:
                continue
            ua = u0 + hit[0] * (u1 - u0)
            ub = v0 + hit[1] * (v1 - v0)
            if same and abs(ua - ub) <= 10 * tol:
                continue
            a_end = ua <= tol or ua >= len_a - tol or any(abs(ua - x) <= tol for x in ignore_params)
            b_end = ub <= tol or ub >= len_b - tol or any(abs(ub - x) <= tol for x in ignore_params)
            if a_end and b_end:
                continue
            return (ua, ub)
    return None


def is_simple_arc(surface, arc):
    pieces = arc_pieces(surface, arc)
    return _pieces_conflicts(pieces, pieces, surface.clearance(), True, arc.length, arc.length) is None


def arcs_interiors_disjoint(surface, a, b):
    """True when two arcs meet at most at their endpoints."""
    pa, pb = arc_pieces(surface, a), arc_pieces(surface, b)
    return _pieces_conflicts(pa, pb, surface.clearance(), False, a.length, b.length) is None


def multiarc_is_simple(surface, multiarc, closed=False):
    verts = multiarc.vertices()
    inner = verts[1:-1] if closed else verts
    if closed and verts[0] in verts[1:-1]:
        return False
    if len(set(inner)) != len(inner):
        return False
    pieces = []
    off = 0.0
    junctions = []
    for a in multiarc.segments:
        pieces.extend(arc_pieces(surface, a, off))
        off += a.length
        junctions.append(off)
    total = off
    return _pieces_conflicts(pieces, pieces, surface.clearance(), True, total, total,
                             ignore_params=junctions[:-1]) is None


def junction_angles(surface, incoming, outgoing):
    """Side angles at the vertex where ``incoming`` ends and ``outgoing`` starts.

    Interior vertices give (left, right); boundary vertices give the single
    interior angle and None.
    """
    vert = surface.vertex(incoming.end)
    a_in = incoming.end_angle
    a_out = outgoing.start_angle
    if vert.on_boundary:
        return (abs(a_out - a_in), None)
    delta = (a_out - a_in) % vert.angle
    return (delta, vert.angle - delta)


def junction_ok(surface, incoming, outgoing, eps=1e-9):
    left, right = junction_angles(surface, incoming, outgoing)
    if right is None:
        return left >= math.pi - eps
    return left >= math.pi - eps and right >= math.pi - eps


def make_multiarc(surface, segments):
    angles = tuple(junction_angles(surface, a, b) for a, b in zip(segments, segments[1:]))
    return MultiArc(tuple(segments), angles)


def raw_length_spectrum(surface, L, *, budget=DEFAULT_BUDGET):
    arcs = enumerate_arcs(surface, L, budget=budget)
    return spectrum_of(arcs, L)


def spectrum_of(arcs, L, eps=1e-9):
    lengths = []
    witnesses = []
    for a in sorted(arcs, key=lambda a: a.length):
        if lengths and abs(a.length - lengths[-1][0]) <= eps * max(1.0, a.length):
            lengths[-1][1] += 1
            witnesses[-1].append(a)
        else:
            lengths.append([a.length, 1])
            witnesses.append([a])
    return SpectrumResult(L, [(l, m) for l, m in lengths], witnesses)


def _initial_bound(surface):
    return max(min(surface.side_length(t, s) for t, s in surface.edges()), 1e-6)


def shortest_arc(surface, p, q, *, budget=DEFAULT_BUDGET, max_doublings=40):
    """A shortest arc from p to q (p == q gives the shortest loop arc)."""
    _check_vertex(surface, p)
    _check_vertex(surface, q)
    L = _initial_bound(surface)
    for _ in range(max_doublings):
        arcs = enumerate_arcs(surface, L, p, q, budget=budget)
        if arcs:
            return arcs[0]
        L *= 2.0
    raise NoArcExists(f"no arc joins {p} and {q}")


def _oriented(arcs):
    out = []
    for a in arcs:
        out.append(a)
        out.append(a.reversed())
    return out


def geodesic_path(surface, p, q, *, budget=DEFAULT_BUDGET, max_doublings=40):
    """A length-minimizing path from p to q as a chain of arcs.

    Dijkstra over (arc, orientation) states; a transition is admissible only
    when the junction angle condition holds.
    """
    _check_vertex(surface, p)
    _check_vertex(surface, q)
    if p == q:
        raise ValueError("endpoints must differ")
    L = _initial_bound(surface)
    for _ in range(max_doublings):
        arcs = _oriented(enumerate_arcs(surface, L, budget=budget))
        by_start = {}
        for i, a in enumerate(arcs):
            by_start.setdefault(a.start, []).append(i)
        heap = [(arcs[i].length, arcs[i].sort_key(), i, ()) for i in by_start.get(p, ())]
        heapq.heapify(heap)
        settled = set()
        while heap:
            d, _, i, prev = heapq.heappop(heap)
            if i in settled:
                continue
            settled.add(i)
            path = prev + (i,)
            a = arcs[i]
            if a.end == q:
                if d <= L + 1e-9:
                    return make_multiarc(surface, [arcs[j] for j in path])
                break
            if a.end == p:
                continue
            for j in by_start.get(a.end, ()):
                if j in settled or (arcs[j].end in [arcs[x].start for x in path]):
                    continue
                if junction_ok(surface, a, arcs[j]):
                    heapq.heappush(heap, (d + arcs[j].length, arcs[j].sort_key(), j, path))
        L *= 2.0
    raise NoArcExists(f"no path joins {p} and {q}")


def _loop_key(segs):
    fwd = tuple(a.crossing.key() for a in segs)
    bwd = tuple(a.reversed().crossing.key() for a in reversed(segs))
    return min(fwd, bwd)


def enumerate_loops(surface, L, base=None, *, budget=DEFAULT_BUDGET):
    """Geodesic loops of length <= L based at labeled points (or at ``base``)."""
    if base is not None:
        _check_vertex(surface, base)
    arcs = _oriented(enumerate_arcs(surface, L, budget=budget))
    by_start = {}
    for a in arcs:
        by_start.setdefault(a.start, []).append(a)
    for lst in by_start.values():
        lst.sort(key=Arc.sort_key)
    bases = [base] if base is not None else sorted(surface.labels)
    tol = 1e-9 * max(1.0, L)
    loops = {}
    for b in bases:
        stack = [(a,) for a in reversed(by_start.get(b, ()))]
        while stack:
            segs = stack.pop()
            total = math.fsum(a.length for a in segs)
            last = segs[-1]
            if last.end == b:
                key = _loop_key(segs)
                if (b, key) not in loops:
                    ma = make_multiarc(surface, list(segs))
                    loops[(b, key)] = GeodesicLoop(ma, multiarc_is_simple(surface, ma, closed=True))
            for nxt in by_start.get(last.end, ()):
                if total + nxt.length > L + tol:
                    continue
                if junction_ok(surface, last, nxt):
                    stack.append(segs + (nxt,))
    out = list(loops.values())
    out.sort(key=lambda lp: (round(lp.length, 9), lp.base, _loop_key(lp.multiarc.segments)))
    return out


def classify_simple_loop(surface, loop):
    """Tag a simple loop as 'null', 'boundary_parallel' or 'essential' by cutting along it."""
    from .surgery import classify_by_cut

    if not loop.simple:
        raise NotSimple("loop is not simple")
    return classify_by_cut(surface, loop.multiarc)


def shortest_essential_loop(surface, *, budget=DEFAULT_BUDGET, max_doublings=30):
    """Shortest simple loop that is neither null-homotopic nor boundary-parallel."""
    topo = surface.topology()
    if topo.boundary_components > 1 or topo.genus < 1:
        raise NoEssentialLoop(
            f"need genus >= 1 and at most one boundary component (got g={topo.genus}, "
            f"b={topo.boundary_components})")
    L = _initial_bound(surface)
    for _ in range(max_doublings):
        for lp in enumerate_loops(surface, L, budget=budget):
            if not lp.simple:
                continue
            tag = classify_simple_loop(surface, lp)
            if tag == "essential":
                return GeodesicLoop(lp.multiarc, True, tag)
        L *= 2.0
    raise NoEssentialLoop("no essential loop found within the doubling limit")
