"""Command-line interface.

Exit codes: 0 success, 1 validation failure, 2 usage error, 3 search budget exceeded.
Tables go to stdout tab-delimited; diagnostics go to stderr (JSON lines with --json).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

from . import geodesics as geo
from .errors import FlatSurfaceError, SearchBudgetExceeded
from .io import (dump_result, load_result, load_surface, revalidate_result, spectrum_to_dict,
                 triangulation_to_dict, unfolding_to_dict)

EXIT_OK, EXIT_INVALID, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Out:
    def __init__(self, as_json):
        self.as_json = as_json

    def diag(self, level, code, message, **extra):
        if self.as_json:
            rec = {"level": level, "code": code, "message": message}
            rec.update(extra)
            print(json.dumps(rec, sort_keys=True), file=sys.stderr)
        else:
            print(f"{level}: {code}: {message}", file=sys.stderr)

    @staticmethod
    def row(*cells):
        print("\t".join(_cell(c) for c in cells))


def _cell(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return f"{x:.12g}"
    if isinstance(x, (tuple, list)):
        return "(" + ",".join(_cell(y) for y in x) + ")"
    return str(x)


def _crossings(arc):
    return " ".join(f"{t}:{a}>{b}" for t, a, b in arc.crossing.crossings)


def _arc_row(out, arc):
    out.row(arc.start, arc.end, arc.length, arc.vector, _crossings(arc))


# ----------------------------------------------------------------------
# commands


def cmd_validate(args, out):
    s = load_surface(args.surface)
    from .surface import gauss_bonnet_check

    res = gauss_bonnet_check(s)
    status = EXIT_OK
    if abs(res) >= 1e-9:
        out.diag("error", "GaussBonnet", f"residual {res:.3g}")
        status = EXIT_INVALID
    if args.result:
        problems = revalidate_result(s, load_result(args.result))
        for p in problems:
            out.diag("error", "ResultInvalid", p)
        if problems:
            status = EXIT_INVALID
    out.row("status", "ok" if status == EXIT_OK else "invalid")
    out.row("triangles", len(s.triangles))
    out.row("labels", len(s.labels))
    return status


def cmd_info(args, out):
    s = load_surface(args.surface)
    from .surface import gauss_bonnet_check

    topo = s.topology()
    out.row("name", s.name or "")
    out.row("euler_characteristic", topo.euler_characteristic)
    out.row("orientable", topo.orientable)
    out.row("boundary_components", topo.boundary_components)
    out.row("genus" if topo.orientable else "crosscaps", topo.genus)
    out.row("V", topo.vertices)
    out.row("E", topo.edges)
    out.row("F", topo.faces)
    out.row("area", s.area())
    out.row("diameter", s.diameter())
    out.row("gauss_bonnet_residual", gauss_bonnet_check(s))
    print()
    out.row("vertex", "angle", "angle_over_pi", "curvature", "boundary", "labeled", "singular")
    for v in s.vertices:
        flat = math.pi if v.on_boundary else 2 * math.pi
        out.row(v.id, v.angle, v.angle / math.pi, flat - v.angle, v.on_boundary, v.labeled, v.singular)
    return EXIT_OK


def cmd_arcs(args, out):
    s = load_surface(args.surface)
    arcs = geo.enumerate_arcs(s, args.max_length, args.from_, args.to, budget=args.budget)
    out.row("start", "end", "length", "vector", "crossings")
    for a in arcs:
        _arc_row(out, a)
    if args.out:
        from .io import arc_to_dict, RESULT_FORMAT

        dump_result({"format": RESULT_FORMAT, "kind": "arcs", "surface": s.name,
                     "bound": args.max_length, "arcs": [arc_to_dict(a) for a in arcs]}, args.out)
    return EXIT_OK


def cmd_spectrum(args, out):
    s = load_surface(args.surface)
    res = geo.raw_length_spectrum(s, args.max_length, budget=args.budget)
    out.row("length", "multiplicity")
    for length, m in res.lengths:
        out.row(length, m)
    if args.out:
        dump_result(spectrum_to_dict(s, res), args.out)
    if args.figure:
        from .plotting import plot_spectrum

        plot_spectrum(res, args.figure)
    return EXIT_OK


def cmd_shortest(args, out):
    s = load_surface(args.surface)
    if args.from_ == args.to:
        path = geo.make_multiarc(s, [geo.shortest_arc(s, args.from_, args.to, budget=args.budget)])
    else:
        path = geo.geodesic_path(s, args.from_, args.to, budget=args.budget)
    out.row("length", path.length)
    out.row("start", "end", "length", "vector", "crossings")
    for a in path.segments:
        _arc_row(out, a)
    return EXIT_OK


def cmd_loops(args, out):
    s = load_surface(args.surface)
    loops = geo.enumerate_loops(s, args.max_length, args.base, budget=args.budget)
    out.row("base", "length", "segments", "simple", "vertices")
    for lp in loops:
        out.row(lp.base, lp.length, len(lp.multiarc.segments), lp.simple, lp.multiarc.vertices())
    return EXIT_OK


def cmd_essential(args, out):
    s = load_surface(args.surface)
    lp = geo.shortest_essential_loop(s, budget=args.budget)
    out.row("base", "length", "simple", "class")
    out.row(lp.base, lp.length, lp.simple, lp.homotopy_class_tag)
    out.row("start", "end", "length", "vector", "crossings")
    for a in lp.multiarc.segments:
        _arc_row(out, a)
    return EXIT_OK


def cmd_triangulate(args, out):
    from .triangulation import triangulate, validate_ideal

    s = load_surface(args.surface)
    tri = triangulate(s, budget=args.budget)
    problems = validate_ideal(tri)
    for p in problems:
        out.diag("error", "InvalidTriangulation", p)
    c = tri.counts()
    out.row("V", "E", "F", "B", "valid")
    out.row(c["V"], c["E"], c["F"], c["B"], not problems)
    out.row("edge", "kind", "start", "end", "length")
    for e in tri.edges:
        out.row(e.id, e.kind, e.start, e.end, e.length)
    if args.out:
        dump_result(triangulation_to_dict(tri, problems), args.out)
    if args.svg:
        from .render import render_triangulation

        _write(args.svg, render_triangulation(tri))
    if args.figure:
        from .plotting import plot_triangulation

        plot_triangulation(tri, args.figure)
    return EXIT_INVALID if problems else EXIT_OK


def cmd_unfold(args, out):
    from .unfolding import unfold, validate_unfolding

    s = load_surface(args.surface)
    unf = unfold(s, budget=args.budget)
    rep = validate_unfolding(s, unf)
    for p in rep.problems:
        out.diag("error", "InvalidUnfolding", p)
    if unf.overlap:
        out.diag("warning", "Overlap", "developed disk overlaps itself")
    out.row("cut_arcs", "disk_triangles", "overlap", "valid")
    out.row(len(unf.cut_arcs), len(unf.disk.triangles), unf.overlap, rep.ok)
    out.row("start", "end", "length", "vector", "crossings")
    for a in unf.cut_arcs:
        _arc_row(out, a)
    if args.out:
        dump_result(unfolding_to_dict(unf, rep), args.out)
    if args.svg:
        from .render import render_development

        _write(args.svg, render_development(unf))
    if args.figure:
        from .plotting import plot_development

        plot_development(unf, args.figure)
    return EXIT_OK if rep.ok else EXIT_INVALID


def cmd_render(args, out):
    from .render import render_surface, render_triangulation

    s = load_surface(args.surface)
    if args.mode == "triangulation":
        from .triangulation import triangulate

        tri = triangulate(s, budget=args.budget)
        _write(args.svg, render_triangulation(tri))
        if args.figure:
            from .plotting import plot_triangulation

            plot_triangulation(tri, args.figure)
    else:
        _write(args.svg, render_surface(s))
        if args.figure:
            from .plotting import plot_development
            from .unfolding import unfolding_from_arcs

            plot_development(unfolding_from_arcs(s, []), args.figure)
    out.row("svg", args.svg)
    return EXIT_OK


def _write(path, text):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ----------------------------------------------------------------------
# parser


def _positive(x):
    v = float(x)
    if not v > 0 or not math.isfinite(v):
        raise argparse.ArgumentTypeError("must be a positive number")
    return v


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON-lines diagnostics on stderr")
    common.add_argument("--threads", type=int, default=1,
                        help="worker threads (results do not depend on it)")
    common.add_argument("--budget", type=int, default=geo.DEFAULT_BUDGET,
                        help="developed triangles allowed per wedge search")

    p = argparse.ArgumentParser(prog="flatsurface", description="Geodesic arcs, ideal triangulations and "
                                "disk unfoldings of flat surfaces glued from triangles.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.add_argument("surface", help="surface file (flatsurf/1)")
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "check a surface file (and optionally a result file)")
    sp.add_argument("--result", help="result JSON to re-validate against the surface")
    add("info", cmd_info, "topology, angles, curvature and Gauss-Bonnet residual")
    sp = add("arcs", cmd_arcs, "list arcs up to a length bound")
    sp.add_argument("--max-length", type=_positive, required=True)
    sp.add_argument("--from", dest="from_", type=int)
    sp.add_argument("--to", type=int)
    sp.add_argument("--out")
    sp = add("spectrum", cmd_spectrum, "raw length spectrum")
    sp.add_argument("--max-length", type=_positive, required=True)
    sp.add_argument("--out")
    sp.add_argument("--figure", help="write a matplotlib figure of the spectrum")
    sp = add("shortest", cmd_shortest, "shortest geodesic between labeled points")
    sp.add_argument("--from", dest="from_", type=int, required=True)
    sp.add_argument("--to", type=int, required=True)
    sp = add("loops", cmd_loops, "geodesic loops up to a length bound")
    sp.add_argument("--max-length", type=_positive, required=True)
    sp.add_argument("--base", type=int)
    add("essential-loop", cmd_essential, "shortest essential simple loop")
    for name, func, what in (("triangulate", cmd_triangulate, "ideal triangulation"),
                             ("unfold", cmd_unfold, "disk unfolding")):
        sp = add(name, func, what)
        sp.add_argument("--out", help="result JSON file")
        sp.add_argument("--svg", help="SVG drawing")
        sp.add_argument("--figure", help="matplotlib figure")
    sp = add("render", cmd_render, "draw a disk development or a triangulation overlay")
    sp.add_argument("--svg", required=True)
    sp.add_argument("--mode", choices=("development", "triangulation"), default="development")
    sp.add_argument("--figure")
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    out = _Out(args.json)
    try:
        return args.func(args, out)
    except SearchBudgetExceeded as exc:
        out.diag("error", "SearchBudgetExceeded", str(exc), budget=exc.budget)
        return EXIT_BUDGET
    except FlatSurfaceError as exc:
        out.diag("error", type(exc).__name__, str(exc), **_where(exc))
        return EXIT_INVALID
    except OSError as exc:
        out.diag("error", "IOError", str(exc))
        return EXIT_USAGE


def _where(exc):
    line = getattr(exc, "line", None)
    return {"line": line, "column": exc.column} if line is not None else {}


if __name__ == "__main__":
    sys.exit(main())
