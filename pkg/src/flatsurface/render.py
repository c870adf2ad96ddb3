"""Hand-written SVG output; identical inputs give byte-identical files."""

from __future__ import annotations

import math

from .errors import NotRenderable
from .triangulation import IdealTriangulation, original_corner
from .unfolding import DiskUnfolding, disk_boundary_segments

PALETTE = ["#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf",
           "#8c564b", "#e377c2", "#bcbd22", "#7f7f7f", "#393b79", "#637939"]
SIZE = 640.0
MARGIN = 24.0


def color(i):
    return PALETTE[i % len(PALETTE)]


def _f(x):
    s = f"{x:.3f}"
    return "0.000" if s == "-0.000" else s


class _Canvas:
    def __init__(self, points):
        xs = [p[0] for p in points] or [0.0]
        ys = [p[1] for p in points] or [0.0]
        self.x0, self.y1 = min(xs), max(ys)
        span = max(max(xs) - self.x0, self.y1 - min(ys), 1e-12)
        self.k = (SIZE - 2 * MARGIN) / span
        self.w = (max(xs) - self.x0) * self.k + 2 * MARGIN
        self.h = (self.y1 - min(ys)) * self.k + 2 * MARGIN
        self.items = []

    def pt(self, p):
        return (MARGIN + (p[0] - self.x0) * self.k, MARGIN + (self.y1 - p[1]) * self.k)

    def path(self, pts, closed=True, **attrs):
        q = [self.pt(p) for p in pts]
        d = "M " + " L ".join(f"{_f(x)} {_f(y)}" for x, y in q) + (" Z" if closed else "")
        self.items.append(f'<path d="{d}"{_attrs(attrs)}/>')

    def text(self, p, s, **attrs):
        x, y = self.pt(p)
        self.items.append(f'<text x="{_f(x)}" y="{_f(y)}"{_attrs(attrs)}>{s}</text>')

    def dot(self, p, r=3.0, **attrs):
        x, y = self.pt(p)
        self.items.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="{_f(r)}"{_attrs(attrs)}/>')

    def svg(self, title):
        head = ('<?xml version="1.0" encoding="UTF-8"?>\n'
                f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
                f'width="{_f(self.w)}" height="{_f(self.h)}" '
                f'viewBox="0 0 {_f(self.w)} {_f(self.h)}">\n'
                f'<title>{title}</title>\n')
        return head + "\n".join(self.items) + "\n</svg>\n"


def _attrs(attrs):
    return "".join(f' {k.rstrip("_").replace("_", "-")}="{v}"' for k, v in attrs.items())


def render_development(unfolding, title=None):
    """SVG of a developed disk; paired seam copies share a color."""
    disk = unfolding.disk
    pos = unfolding.development.positions
    cv = _Canvas([p for t in sorted(pos) for p in pos[t]])
    for t in sorted(pos):
        cv.path(pos[t], class_="tri", fill="#eef3fb", stroke="#a0aab4", stroke_width="0.5")
    outline = []
    for tag, sides, _ in disk_boundary_segments(disk):
        pts = [pos[sides[0][0]][sides[0][1]]] + [pos[t][(s + 1) % 3] for t, s in sides]
        outline.extend(pts[:-1])
        if isinstance(tag, int):
            cv.path(pts, closed=False, class_="seam", data_seam=str(tag), fill="none",
                    stroke=color(tag), stroke_width="2.5")
        else:
            cv.path(pts, closed=False, class_="boundary", fill="none", stroke="#000000",
                    stroke_width="1.5")
    if outline:
        cv.path(outline, class_="outline", fill="none", stroke="none")
    seen = set()
    for t in sorted(pos):
        for k in range(3):
            if disk.vertex_at(t, k) not in disk.labels:
                continue
            p = pos[t][k]
            key = (round(p[0], 6), round(p[1], 6))
            if key in seen:
                continue
            seen.add(key)
            oc = original_corner(unfolding.surface, disk, t, k)
            name = unfolding.surface.vertex_at(*oc) if oc is not None else "?"
            cv.dot(p, class_="label", fill="#000000")
            cv.text(p, f"p{name}", font_size="11", dx="4", dy="-4")
    return cv.svg(title or f"development of {unfolding.surface.name or 'surface'}")


def _face_points(lengths):
    a, b, c = lengths
    x = (a * a + c * c - b * b) / (2.0 * a)
    y = math.sqrt(max(c * c - x * x, 0.0))
    return [(0.0, 0.0), (a, 0.0), (x, y)]


def render_triangulation(tri, title=None):
    """Faces of an ideal triangulation laid out in a grid, sides colored by edge."""
    faces = tri.faces
    cols = max(1, math.ceil(math.sqrt(len(faces))))
    cell = max((max(f.lengths) for f in faces), default=1.0) * 1.25
    placed = []
    for i, f in enumerate(faces):
        ox, oy = (i % cols) * cell, -(i // cols) * cell
        pts = [(x + ox, y + oy) for x, y in _face_points(f.lengths)]
        placed.append(pts)
    cv = _Canvas([p for pts in placed for p in pts])
    boundary = {e.id for e in tri.edges if e.kind == "boundary"}
    for i, (f, pts) in enumerate(zip(faces, placed)):
        cv.path(pts, class_="face", data_face=str(i), fill="#f4f1e8", stroke="none")
        for k, eid in enumerate(f.edges):
            seg = [pts[k], pts[(k + 1) % 3]]
            extra = {"stroke_dasharray": "4 2"} if eid in boundary else {}
            cv.path(seg, closed=False, class_="edge", data_edge=str(eid), fill="none",
                    stroke=color(eid), stroke_width="2", **extra)
            mid = ((seg[0][0] + seg[1][0]) / 2, (seg[0][1] + seg[1][1]) / 2)
            cv.text(mid, f"e{eid}", font_size="10")
        for k, v in enumerate(f.vertices):
            cv.dot(pts[k], class_="label", fill="#000000")
            cv.text(pts[k], f"p{v}", font_size="11", dx="4", dy="-4")
    return cv.svg(title or f"ideal triangulation of {tri.surface.name or 'surface'}")


def render_surface(surface, title=None):
    """Development of a surface that is itself a disk."""
    from .unfolding import unfolding_from_arcs

    topo = surface.topology()
    if not (topo.components == 1 and topo.euler_characteristic == 1 and topo.boundary_components == 1):
        raise NotRenderable("only disks can be drawn as developments; use the triangulation overlay")
    return render_development(unfolding_from_arcs(surface, []), title)


def render_svg(obj, title=None):
    if isinstance(obj, DiskUnfolding):
        return render_development(obj, title)
    if isinstance(obj, IdealTriangulation):
        return render_triangulation(obj, title)
    return render_surface(obj, title)
