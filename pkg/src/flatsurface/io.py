"""The ``flatsurf/1`` text format and JSON result files.

Grammar (one record per line, ``#`` starts a comment)::

    flatsurf/1 [name]
    tri <id> coords x0 y0 x1 y1 x2 y2
    tri <id> sides a b c          # side 0 is placed on the positive x-axis
    glue <t>.<s> <t>.<s> [rev]
    label <t>.<c>
    label <t> bary b0 b1 b2       # refines the mesh at that point

Side ``s`` of a triangle runs from corner ``s`` to corner ``s + 1``.
"""

from __future__ import annotations

import json
import math

from . import _geom as g
from .errors import (DanglingGluing, DegenerateTriangle, FlatSurfaceError, MismatchedEdgeLengths,
                     SurfaceSyntaxError)
from .geodesics import Arc, CrossingSequence
from .surface import DEFAULT_TOL, build_surface

HEADER = "flatsurf/1"
RESULT_FORMAT = "flatsurf-result/1"


def _num(tok, line, col):
    try:
        x = float(tok)
    except ValueError:
        raise SurfaceSyntaxError(f"expected a number, got {tok!r}", line, col) from None
    if not math.isfinite(x):
        raise SurfaceSyntaxError(f"non-finite number {tok!r}", line, col)
    return x


def _int(tok, line, col):
    try:
        return int(tok)
    except ValueError:
        raise SurfaceSyntaxError(f"expected an integer, got {tok!r}", line, col) from None


def _side_ref(tok, line, col, limit=2):
    parts = tok.split(".")
    if len(parts) != 2:
        raise SurfaceSyntaxError(f"expected <triangle>.<index>, got {tok!r}", line, col)
    t = _int(parts[0], line, col)
    s = _int(parts[1], line, col + len(parts[0]) + 1)
    if not 0 <= s <= limit:
        raise SurfaceSyntaxError(f"index {s} out of range 0..{limit}", line, col)
    return t, s


def triangle_from_sides(a, b, c, eps=1e-9):
    """Corners with side 0 (length a) on the positive x-axis."""
    if min(a, b, c) <= 0 or a >= b + c - eps * max(a, b, c) or b >= a + c - eps * max(a, b, c) \
            or c >= a + b - eps * max(a, b, c):
        raise DegenerateTriangle(f"side lengths {a}, {b}, {c} violate the strict triangle inequality")
    x = (a * a + c * c - b * b) / (2.0 * a)
    y = math.sqrt(max(c * c - x * x, 0.0))
    return ((0.0, 0.0), (a, 0.0), (x, y))


def _tokens(raw):
    """Split a line into (token, 1-based column) pairs, dropping comments."""
    text = raw.split("#", 1)[0]
    out = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        out.append((text[i:j], i + 1))
        i = j
    return out


def parse_surface(text, *, tol=DEFAULT_TOL):
    """Build a Surface from ``flatsurf/1`` text; errors carry line and column."""
    tris, tri_line = {}, {}
    gluings, glue_line = [], []
    corner_labels, bary_labels = [], []
    name = None
    seen_header = False
    for ln, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        head, col = toks[0]
        if not seen_header:
            if head != HEADER:
                raise SurfaceSyntaxError(f"expected header {HEADER!r}, got {head!r}", ln, col)
            seen_header = True
            if len(toks) > 1:
                name = " ".join(t for t, _ in toks[1:])
            continue
        if head == "tri":
            if len(toks) < 3:
                raise SurfaceSyntaxError("incomplete triangle record", ln, col)
            t = _int(toks[1][0], ln, toks[1][1])
            if t in tris:
                raise SurfaceSyntaxError(f"triangle {t} defined twice", ln, toks[1][1])
            kind, kcol = toks[2]
            vals = [_num(tok, ln, c) for tok, c in toks[3:]]
            try:
                if kind == "coords":
                    if len(vals) != 6:
                        raise SurfaceSyntaxError("coords needs 6 numbers", ln, kcol)
                    tris[t] = ((vals[0], vals[1]), (vals[2], vals[3]), (vals[4], vals[5]))
                    if abs(g.signed_area(*tris[t])) <= tol.eps_area:
                        raise DegenerateTriangle(f"triangle {t} is degenerate")
                elif kind == "sides":
                    if len(vals) != 3:
                        raise SurfaceSyntaxError("sides needs 3 numbers", ln, kcol)
                    tris[t] = triangle_from_sides(*vals, eps=tol.eps_len)
                else:
                    raise SurfaceSyntaxError(f"unknown triangle form {kind!r}", ln, kcol)
            except FlatSurfaceError as exc:
                if isinstance(exc, SurfaceSyntaxError):
                    raise
                raise type(exc)(f"line {ln}: {exc}") from None
            tri_line[t] = ln
        elif head == "glue":
            if len(toks) not in (3, 4) or (len(toks) == 4 and toks[3][0] != "rev"):
                raise SurfaceSyntaxError("expected: glue <t>.<s> <t>.<s> [rev]", ln, col)
            a = _side_ref(toks[1][0], ln, toks[1][1])
            b = _side_ref(toks[2][0], ln, toks[2][1])
            gluings.append((a, b, len(toks) == 4))
            glue_line.append(ln)
        elif head == "label":
            if len(toks) == 2:
                corner_labels.append((_side_ref(toks[1][0], ln, toks[1][1]), ln))
            elif len(toks) == 6 and toks[2][0] == "bary":
                t = _int(toks[1][0], ln, toks[1][1])
                w = [_num(tok, ln, c) for tok, c in toks[3:]]
                bary_labels.append((t, w, ln))
            else:
                raise SurfaceSyntaxError("expected: label <t>.<c> or label <t> bary b0 b1 b2", ln, col)
        else:
            raise SurfaceSyntaxError(f"unknown record {head!r}", ln, col)
    if not seen_header:
        raise SurfaceSyntaxError("empty file", 1, 1)

    used = {}
    for (a, b, rev), ln in zip(gluings, glue_line):
        for side in (a, b):
            if side[0] not in tris:
                raise DanglingGluing(f"line {ln}: gluing references missing triangle {side[0]}")
            if side in used:
                raise DanglingGluing(f"line {ln}: side {side[0]}.{side[1]} already glued on line {used[side]}")
            used[side] = ln
        la = g.norm(g.sub(tris[a[0]][(a[1] + 1) % 3], tris[a[0]][a[1]]))
        lb = g.norm(g.sub(tris[b[0]][(b[1] + 1) % 3], tris[b[0]][b[1]]))
        if abs(la - lb) > tol.eps_len * max(1.0, la):
            raise MismatchedEdgeLengths(
                f"line {ln}: glued sides {a[0]}.{a[1]} ({la:.12g}) and {b[0]}.{b[1]} ({lb:.12g}) differ")
    for (t, c), ln in corner_labels:
        if t not in tris:
            raise DanglingGluing(f"line {ln}: label references missing triangle {t}")
    for t, _, ln in bary_labels:
        if t not in tris:
            raise DanglingGluing(f"line {ln}: label references missing triangle {t}")

    hints = [c for c, _ in corner_labels]
    if bary_labels:
        # refinement needs a surface first; labels are re-checked afterwards
        from .surface import Surface
        from .surgery import refine_at_point

        glue = {}
        for a, b, rev in gluings:
            glue[a] = (b[0], b[1], rev)
            glue[b] = (a[0], a[1], rev)
        s = Surface(tris, glue, hints, tol=tol, name=name, require_labels=False)
        for t, w, ln in bary_labels:
            live = [x for x in s.triangles if s.origin[x] == t]
            s = _refine_in(s, live, t, tris[t], w, refine_at_point)
        return s._derive(s.triangles, s.gluings, s.labeled_corners, None, None)
    return build_surface(tris, gluings, hints, tol=tol, name=name)


def _refine_in(s, live, t, corners, w, refine):
    total = math.fsum(w)
    P = (math.fsum(w[i] * corners[i][0] for i in range(3)) / total,
         math.fsum(w[i] * corners[i][1] for i in range(3)) / total)
    # the triangle may already be split; find the child containing the point
    for x in sorted(live):
        C = s.corners(x)
        area = g.signed_area(*C)
        b = [g.signed_area(P, C[(i + 1) % 3], C[(i + 2) % 3]) / area for i in range(3)]
        if min(b) >= -1e-12:
            s, _ = refine(s, x, b, label=True)
            return s
    raise DanglingGluing(f"barycentric label outside triangle {t}")


def _fmt(x):
    return repr(float(x))


def serialize_surface(surface, name=None):
    """Canonical ``flatsurf/1`` text for a surface (labels as one corner per class)."""
    name = name if name is not None else surface.name
    lines = [HEADER + (f" {name}" if name else "")]
    for t in surface.triangle_ids():
        pts = " ".join(f"{_fmt(x)} {_fmt(y)}" for x, y in surface.corners(t))
        lines.append(f"tri {t} coords {pts}")
    done = set()
    for (t, s) in sorted(surface.gluings):
        t2, s2, rev = surface.gluings[(t, s)]
        if (t, s) in done:
            continue
        done.update({(t, s), (t2, s2)})
        lines.append(f"glue {t}.{s} {t2}.{s2}" + (" rev" if rev else ""))
    for v in surface.vertices:
        if v.labeled and not v.singular:
            t, c = min(v.corners)
            lines.append(f"label {t}.{c}")
    return "\n".join(lines) + "\n"


def load_surface(path):
    with open(path, encoding="utf-8") as fh:
        return parse_surface(fh.read())


# ----------------------------------------------------------------------
# results


def arc_to_dict(arc):
    cs = arc.crossing
    return {
        "start": cs.start[0], "start_corner": list(cs.start[1]),
        "end": cs.end[0], "end_corner": list(cs.end[1]),
        "crossings": [list(x) for x in cs.crossings],
        "vector": list(arc.vector), "end_vector": list(arc.end_vector),
        "length": arc.length,
        "start_angle": arc.start_angle, "end_angle": arc.end_angle,
    }


def arc_from_dict(d):
    cs = CrossingSequence((d["start"], tuple(d["start_corner"])),
                          tuple(tuple(x) for x in d["crossings"]),
                          (d["end"], tuple(d["end_corner"])))
    return Arc(cs, tuple(d["vector"]), tuple(d["end_vector"]), d["length"],
               d["start_angle"], d["end_angle"])


def spectrum_to_dict(surface, result):
    rows = []
    for (length, mult), wit in zip(result.lengths, result.witnesses):
        rows.append({"length": length, "multiplicity": mult,
                     "witness": arc_to_dict(wit[0])})
    return {"format": RESULT_FORMAT, "kind": "spectrum", "surface": surface.name,
            "bound": result.bound, "rows": rows}


def triangulation_to_dict(tri, problems=()):
    edges = []
    for e in tri.edges:
        rec = {"id": e.id, "kind": e.kind, "start": e.start, "end": e.end, "length": e.length}
        if e.arc is not None:
            rec["arc"] = arc_to_dict(e.arc)
        else:
            rec["sides"] = [list(x) for x in e.sides]
        edges.append(rec)
    faces = [{"edges": list(f.edges), "lengths": list(f.lengths), "vertices": list(f.vertices)}
             for f in tri.faces]
    return {"format": RESULT_FORMAT, "kind": "triangulation", "surface": tri.surface.name,
            "counts": tri.counts(), "vertices": list(tri.vertices), "edges": edges,
            "faces": faces, "valid": not problems, "problems": list(problems)}


def unfolding_to_dict(unf, report=None):
    dev = unf.development
    seams = {str(k): [[list(s) for s in copy] for copy in v] for k, v in sorted(unf.seam_labels.items())}
    return {
        "format": RESULT_FORMAT, "kind": "unfolding", "surface": unf.surface.name,
        "cut_arcs": [arc_to_dict(a) for a in unf.cut_arcs],
        "disk": serialize_surface(unf.disk, name=f"{unf.surface.name or 'surface'}-disk"),
        "disk_tags": [[t, s, tag] for (t, s), tag in sorted(unf.disk.side_tags.items())
                      if isinstance(tag, int)],
        "development": {"root": dev.root, "overlap": dev.overlap,
                        "triangles": {str(t): [list(p) for p in dev.positions[t]]
                                      for t in sorted(dev.positions)}},
        "seam_pairs": seams,
        "valid": report.ok if report is not None else None,
        "problems": list(report.problems) if report is not None else [],
    }


def dump_result(obj, path):
    text = json.dumps(obj, indent=1, sort_keys=True) + "\n"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)
    return text


def load_result(path):
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def revalidate_result(surface, data):
    """Re-check a stored result against its surface without recomputing it."""
    from .geodesics import arcs_interiors_disjoint, is_simple_arc, validate_arc

    problems = []
    kind = data.get("kind")
    if kind == "triangulation":
        arcs = [arc_from_dict(e["arc"]) for e in data["edges"] if "arc" in e]
        c = data["counts"]
        chi = surface.topology().euler_characteristic
        if c["V"] - c["E"] + c["F"] != chi:
            problems.append("Euler count mismatch")
        if 3 * c["F"] != 2 * c["E"] - c["B"]:
            problems.append("face/edge count mismatch")
    elif kind == "unfolding":
        arcs = [arc_from_dict(a) for a in data["cut_arcs"]]
    elif kind == "spectrum":
        arcs = [arc_from_dict(r["witness"]) for r in data["rows"]]
    else:
        return [f"unknown result kind {kind!r}"]
    for i, a in enumerate(arcs):
        problems += [f"arc {i}: {p}" for p in validate_arc(surface, a)]
        if kind != "spectrum" and not is_simple_arc(surface, a):
            problems.append(f"arc {i} is not simple")
    if kind != "spectrum":
        for i in range(len(arcs)):
            for j in range(i + 1, len(arcs)):
                if not arcs_interiors_disjoint(surface, arcs[i], arcs[j]):
                    problems.append(f"arcs {i} and {j} cross")
    return problems
