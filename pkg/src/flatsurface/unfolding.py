"""Disk unfoldings: cut along finitely many arcs until one flat disk remains."""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from . import _geom as g
from .errors import FlatSurfaceError, NotADisk
from .geodesics import DEFAULT_BUDGET, arcs_interiors_disjoint, is_simple_arc, validate_arc
from .surface import TWO_PI, _UnionFind
from .surgery import cut_along
from .triangulation import decompose, is_flat_disk, retrace


@dataclass
class Development:
    positions: dict  # triangle id -> three planar points
    overlap: bool
    root: int


@dataclass
class DiskUnfolding:
    surface: object
    cut_arcs: list  # Arcs on the input surface
    disk: object
    development: Development
    seam_labels: dict = field(default_factory=dict)  # cut index -> [sides of copy A, sides of copy B]
    cut_records: list = field(default_factory=list)

    @property
    def overlap(self):
        return self.development.overlap


@dataclass
class UnfoldingReport:
    problems: list
    flatness: float = 0.0
    area_error: float = 0.0
    cut_edges: int = 0
    cut_vertices: int = 0

    @property
    def ok(self):
        return not self.problems


def _triangles_overlap(P, Q, tol):
    for tri in (P, Q):
        for i in range(3):
            a, b = tri[i], tri[(i + 1) % 3]
            n = (b[1] - a[1], a[0] - b[0])
            ln = math.hypot(*n)
            pp = [g.dot(n, x) / ln for x in P]
            qq = [g.dot(n, x) / ln for x in Q]
            if max(pp) <= min(qq) + tol or max(qq) <= min(pp) + tol:
                return False
    return True


def develop_disk(disk):
    """Lay a disk out in the plane breadth-first from its least triangle."""
    topo = disk.topology()
    if not (topo.components == 1 and topo.euler_characteristic == 1 and topo.boundary_components == 1):
        raise NotADisk("development needs a topological disk")
    from .geodesics import develop_across

    tris = disk.triangles
    root = min(tris)
    pos = {root: tris[root]}
    queue = deque([root])
    while queue:
        t = queue.popleft()
        for s in range(3):
            p = disk.partner(t, s)
            if p is None or p[0] in pos:
                continue
            pos[p[0]] = develop_across(tris, pos[t], s, p[0], p[1], p[2])
            queue.append(p[0])
    tol = disk.clearance() * 10
    ids = sorted(pos)
    boxes = {t: (min(x for x, _ in pos[t]), max(x for x, _ in pos[t]),
                 min(y for _, y in pos[t]), max(y for _, y in pos[t])) for t in ids}
    overlap = False
    for a, b in combinations(ids, 2):
        ba, bb = boxes[a], boxes[b]
        if ba[1] <= bb[0] + tol or bb[1] <= ba[0] + tol or ba[3] <= bb[2] + tol or bb[3] <= ba[2] + tol:
            continue
        if _triangles_overlap(pos[a], pos[b], tol):
            overlap = True
            break
    return Development(pos, overlap, root)


def disk_boundary_segments(disk):
    """Boundary of a disk split at labeled vertices: [(tag, sides, length)]."""
    comps = disk.boundary_components()
    if not comps:
        return []
    cyc = disk.boundary_cycle(comps[0]["sides"])
    labeled = [i for i, (t, s, fc, tc) in enumerate(cyc) if disk.vertex_at(t, fc) in disk.labels]
    if labeled:
        cyc = cyc[labeled[0]:] + cyc[:labeled[0]]
    out, cur = [], []
    for t, s, fc, tc in cyc:
        cur.append((t, s))
        if disk.vertex_at(t, tc) in disk.labels:
            out.append((disk.side_tags.get(cur[0]), tuple(cur),
                        math.fsum(disk.side_length(*x) for x in cur)))
            cur = []
    if cur:
        out.append((disk.side_tags.get(cur[0]), tuple(cur), math.fsum(disk.side_length(*x) for x in cur)))
    return out


def _seams(disk):
    seams = {}
    for tag, sides, _ in disk_boundary_segments(disk):
        if isinstance(tag, int):
            seams.setdefault(tag, []).append(list(sides))
    return seams


def _star_unfolding(surface, budget):
    """Shortest arcs from the least label to every other one, if they form a disk unfolding."""
    from .geodesics import shortest_arc

    labels = sorted(surface.labels)
    base = labels[0]
    try:
        arcs = [shortest_arc(surface, base, q, budget=budget) for q in labels[1:]]
        unf = unfolding_from_arcs(surface, arcs)
    except FlatSurfaceError:
        return None
    if not validate_unfolding(surface, unf).ok:
        return None
    return unf


def unfold(surface, *, budget=DEFAULT_BUDGET):
    """Cut arcs turning ``surface`` into a single flat disk, plus its development.

    Closed spheres first try the star of shortest arcs from one base point;
    everything else goes through the piece decomposition.
    """
    topo = surface.topology()
    if topo.components == 1 and topo.boundary_components == 0 and topo.euler_characteristic == 2:
        unf = _star_unfolding(surface, budget)
        if unf is not None:
            return unf
    _, _, cuts, pieces, records = decompose(surface, is_flat_disk, budget=budget)
    where = {}
    for i, piece in enumerate(pieces):
        for tag in set(piece.side_tags.values()):
            where.setdefault(tag, set()).add(i)
    uf = _UnionFind()
    for i in range(len(pieces)):
        uf.find(i)
    arcs = []
    for eid, piece, arc in cuts:
        holders = sorted(where.get(eid, ()))
        if len(holders) == 2 and uf.find(holders[0]) != uf.find(holders[1]):
            uf.union(holders[0], holders[1])
            continue
        arcs.append(retrace(surface, piece, arc))
    unf = unfolding_from_arcs(surface, arcs)
    unf.cut_records = records + unf.cut_records
    return unf


def unfolding_from_arcs(surface, arcs):
    """Cut along the given arcs and develop the result (no validity checks)."""
    records = []
    if arcs:
        rec = cut_along(surface, list(arcs), tags=list(range(len(arcs))))
        records.append(rec)
        disk = rec.cut
    else:
        disk = surface
    dev = develop_disk(disk)
    return DiskUnfolding(surface, list(arcs), disk, dev, _seams(disk), records)


def interior_flatness(disk):
    dev = 0.0
    for v in disk.vertices:
        if not v.on_boundary:
            dev = max(dev, abs(v.angle - TWO_PI))
    return dev


def validate_unfolding(surface, unfolding):
    """Structured report; ``report.ok`` is True when every check passes."""
    problems = []
    arcs = unfolding.cut_arcs
    for i, a in enumerate(arcs):
        for p in validate_arc(surface, a):
            problems.append(f"arc {i}: {p}")
        if not is_simple_arc(surface, a):
            problems.append(f"arc {i} is not simple")
    for (i, a), (j, b) in combinations(enumerate(arcs), 2):
        if not arcs_interiors_disjoint(surface, a, b):
            problems.append(f"arcs {i} and {j}: interior intersection")
    disk = unfolding.disk
    topo = disk.topology()
    if topo.components != 1:
        problems.append(f"cut result has {topo.components} components")
    if topo.euler_characteristic != 1 or topo.boundary_components != 1:
        problems.append(f"cut result is not a disk (chi={topo.euler_characteristic}, "
                        f"b={topo.boundary_components})")
    flat = interior_flatness(disk)
    if flat >= 1e-9:
        problems.append(f"singular interior: max angle deviation {flat:.3g}")
    area_err = abs(disk.area() - surface.area())
    if area_err > 1e-9 * max(1.0, surface.area()):
        problems.append(f"area changed by {area_err:.3g}")
    seams = _seams(disk)
    for i in range(len(arcs)):
        copies = seams.get(i, [])
        if len(copies) != 2:
            problems.append(f"arc {i} has {len(copies)} seam copies on the disk boundary")
            continue
        la, lb = (math.fsum(disk.side_length(*x) for x in c) for c in copies)
        if abs(la - lb) > 1e-9 * max(1.0, la):
            problems.append(f"seam {i} copies differ in length")
    dev = unfolding.development
    for t, D in dev.positions.items():
        C = disk.corners(t)
        for k in range(3):
            a = g.norm(g.sub(C[(k + 1) % 3], C[k]))
            b = g.norm(g.sub(D[(k + 1) % 3], D[k]))
            if abs(a - b) > 1e-9 * max(1.0, a):
                problems.append(f"developed triangle {t} is not congruent to its chart")
                break
    if set(dev.positions) != set(disk.triangles):
        problems.append("development is not connected")
    verts = {v for a in arcs for v in (a.start, a.end)}
    s_topo = surface.topology()
    if s_topo.boundary_components == 0 and arcs:
        if len(arcs) - len(verts) != 1 - s_topo.euler_characteristic:
            problems.append(f"cut graph has E - V = {len(arcs) - len(verts)}, "
                            f"expected {1 - s_topo.euler_characteristic}")
    return UnfoldingReport(problems, flat, area_err, len(arcs), len(verts))
