"""Acceptance criteria; each test prints one PASS/FAIL line."""

import math
import shutil
import subprocess
import sys
import time
from pathlib import Path

from _oracles import LATTICE_COUNTS, primitive_vector_count, random_gluing
from conftest import ACCEPTANCE_LINES
from flatsurface import (barycentric_refine, enumerate_arcs, enumerate_loops, gauss_bonnet_check,
                         raw_length_spectrum, reglue, shortest_essential_loop, triangulate, unfold,
                         validate_ideal, validate_unfolding)
from flatsurface import fixtures
from flatsurface.cli import main

FIX = Path(__file__).resolve().parent.parent / "fixtures"
CORPUS = fixtures.corpus()
ALL = dict(CORPUS)
ALL.update({"square-disk": fixtures.square_disk(), "flat-cylinder": fixtures.flat_cylinder(),
            "regular-hexagon": fixtures.regular_hexagon()})


def report(n, ok, detail):
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'} - {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert ok, line


def _spectra_match(a, b, tol=1e-9):
    A, B = a.as_multiset(), b.as_multiset()
    return len(A) == len(B) and all(abs(x - y) <= tol for x, y in zip(A, B))


def _label_angles(s):
    return sorted(s.vertex(v).angle for v in s.labels)


def test_criterion_01_gauss_bonnet():
    worst = max(abs(gauss_bonnet_check(s)) for s in CORPUS.values())
    worst_random = max(abs(gauss_bonnet_check(random_gluing(seed))) for seed in range(100))
    report(1, len(CORPUS) == 7 and max(worst, worst_random) < 1e-9,
           f"max residual {worst:.2e} on 7 fixtures, {worst_random:.2e} on 100 random gluings")


def test_criterion_02_lattice_oracle():
    s = fixtures.square_torus()
    Ls = [1.0, math.sqrt(2), 2.0, math.sqrt(5), 3.0]
    got = [len(enumerate_arcs(s, L)) for L in Ls]
    want = [primitive_vector_count(L) for L in Ls]
    frozen = [LATTICE_COUNTS[L] for L in Ls]
    report(2, got == want == frozen, f"counts {got}, oracle {want}")


def test_criterion_03_spectrum_discreteness():
    sizes = {}
    for name, s in ALL.items():
        res = raw_length_spectrum(s, 3 * s.diameter())
        lens = [l for l, _ in res.lengths]
        assert all(math.isfinite(l) for l in lens)
        assert all(b > a for a, b in zip(lens, lens[1:]))
        sizes[name] = len(lens)
    report(3, len(sizes) == len(ALL), f"{len(sizes)} fixtures, distinct lengths {sizes}")


def test_criterion_04_essential_loop():
    s = fixtures.square_torus()
    lp = shortest_essential_loop(s)
    # the search bound is inclusive up to the surface clearance, so enumerate
    # through 1 and look for anything strictly shorter
    upto = enumerate_loops(s, 1.0)
    below = [x for x in upto if x.length < 1.0 - 1e-12]
    ok = abs(lp.length - 1.0) <= 1e-9 and lp.simple and not below and upto
    report(4, ok, f"length {lp.length!r}, simple {lp.simple}, "
                  f"loops up to 1: {len(upto)}, shorter than 1: {len(below)}")


def test_criterion_05_ideal_triangulation():
    expect = {"tetrahedron": (4, 6, 4), "square-torus": (1, 3, 2), "octagon-genus2": (1, 9, 6),
              "doubled-triangle": (3, 3, 2)}
    bad, counts = [], {}
    for name, s in ALL.items():
        tri = triangulate(s)
        if validate_ideal(tri):
            bad.append(name)
        c = tri.counts()
        counts[name] = (c["V"], c["E"], c["F"])
    ok = not bad and all(counts[k] == v for k, v in expect.items())
    report(5, ok, f"invalid: {bad or 'none'}; counts " + ", ".join(f"{k} {counts[k]}" for k in expect))


def test_criterion_06_cut_reglue():
    total, bad = 0, []
    for name, s in CORPUS.items():
        records = triangulate(s).cut_records + unfold(s).cut_records
        for rec in records:
            total += 1
            back = reglue(rec)
            L = 2 * rec.parent.diameter()
            same = _spectra_match(raw_length_spectrum(rec.parent, L), raw_length_spectrum(back, L))
            a, b = _label_angles(rec.parent), _label_angles(back)
            same = same and len(a) == len(b) and all(abs(x - y) <= 1e-9 for x, y in zip(a, b))
            if not same:
                bad.append(name)
    report(6, total > 0 and not bad, f"{total} cuts re-glued, mismatches: {bad or 'none'}")


def test_criterion_07_unfolding():
    bad, flat = [], 0.0
    for name, s in ALL.items():
        rep = validate_unfolding(s, unfold(s))
        flat = max(flat, rep.flatness)
        if not rep.ok:
            bad.append(name)
    report(7, not bad and flat < 1e-9, f"invalid: {bad or 'none'}; max interior deviation {flat:.2e}")


def _run_outputs(tmp, name):
    tmp.mkdir(exist_ok=True)
    out = {}
    for cmd in ("triangulate", "unfold"):
        res, svg = tmp / f"{name}.{cmd}.json", tmp / f"{name}.{cmd}.svg"
        code = main([cmd, str(FIX / f"{name}.surf"), "--out", str(res), "--svg", str(svg)])
        assert code == 0
        out[cmd] = (res.read_bytes(), svg.read_bytes())
    return out


def test_criterion_08_determinism(tmp_path, capsys):
    differ = []
    for name in sorted(ALL):
        a = _run_outputs(tmp_path / "a", name)
        b = _run_outputs(tmp_path / "b", name)
        if a != b:
            differ.append(name)
    capsys.readouterr()
    report(8, not differ, f"{len(ALL)} fixtures x 2 commands, differing: {differ or 'none'}")


def test_criterion_09_refinement_invariance():
    bad = []
    names = ["tetrahedron", "square-torus", "three-holed-sphere"]
    for name in names:
        s = CORPUS[name]
        r = barycentric_refine(s)
        if not _spectra_match(raw_length_spectrum(s, 2.0), raw_length_spectrum(r, 2.0)):
            bad.append(name)
        t0, t1 = s.topology(), r.topology()
        if (t0.euler_characteristic, t0.orientable, t0.boundary_components) != \
                (t1.euler_characteristic, t1.orientable, t1.boundary_components):
            bad.append(name)
    report(9, not bad, f"refined {names}, changed: {bad or 'none'}")


def test_criterion_10_budget():
    exe = shutil.which("flatsurface")
    cmd = [exe] if exe else [sys.executable, "-m", "flatsurface"]
    L = 50 * fixtures.thin_torus().diameter()
    t0 = time.monotonic()
    proc = subprocess.run(cmd + ["arcs", str(FIX / "thin-torus.surf"), "--max-length", repr(L), "--json"],
                          capture_output=True, text=True, timeout=60)
    dt = time.monotonic() - t0
    ok = proc.returncode == 3 and "SearchBudgetExceeded" in proc.stderr and dt < 60
    report(10, ok, f"exit {proc.returncode} after {dt:.1f}s")
