"""Small planar helpers on (x, y) tuples; kept in pure Python for the hot loops."""

import math


def sub(a, b):
    return (a[0] - b[0], a[1] - b[1])


def add(a, b):
    return (a[0] + b[0], a[1] + b[1])


def scale(a, s):
    return (a[0] * s, a[1] * s)


def dot(a, b):
    return a[0] * b[0] + a[1] * b[1]


def cross(a, b):
    return a[0] * b[1] - a[1] * b[0]


def norm(a):
    return math.hypot(a[0], a[1])


def unit(a):
    n = math.hypot(a[0], a[1])
    return (a[0] / n, a[1] / n)


def angle_between(a, b):
    """Unsigned angle in [0, pi] between two non-zero vectors."""
    return math.atan2(abs(cross(a, b)), dot(a, b))


def signed_area(p0, p1, p2):
    return 0.5 * cross(sub(p1, p0), sub(p2, p0))


def corner_angle(p, q, r):
    """Interior angle at p of triangle p, q, r."""
    return angle_between(sub(q, p), sub(r, p))


def segment_distance(p, a, b):
    """Distance from point p to the closed segment ab."""
    ab = sub(b, a)
    den = dot(ab, ab)
    if den == 0.0:
        return norm(sub(p, a))
    t = dot(sub(p, a), ab) / den
    t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
    return math.hypot(p[0] - a[0] - t * ab[0], p[1] - a[1] - t * ab[1])


def place_third(p0, p1, q0, q1, q2, away_from):
    """Place the image of q2 given q0 -> p0, q1 -> p1.

    The image lands on the opposite side of line p0 p1 from ``away_from``
    (the third corner of the triangle already laid out).
    """
    u = sub(q1, q0)
    w = sub(q2, q0)
    uu = dot(u, u)
    a = dot(w, u) / uu
    b = abs(cross(u, w)) / uu
    U = sub(p1, p0)
    N = (-U[1], U[0])
    if dot(N, sub(away_from, p0)) > 0.0:
        N = (-N[0], -N[1])
    return (p0[0] + a * U[0] + b * N[0], p0[1] + a * U[1] + b * N[1])


def linear_map(src_u, src_v, dst_u, dst_v):
    """2x2 matrix M (row-major tuple) with M src_u = dst_u and M src_v = dst_v."""
    det = src_u[0] * src_v[1] - src_v[0] * src_u[1]
    # inverse of [src_u src_v] (columns)
    i00, i01 = src_v[1] / det, -src_v[0] / det
    i10, i11 = -src_u[1] / det, src_u[0] / det
    return (
        dst_u[0] * i00 + dst_v[0] * i10,
        dst_u[0] * i01 + dst_v[0] * i11,
        dst_u[1] * i00 + dst_v[1] * i10,
        dst_u[1] * i01 + dst_v[1] * i11,
    )


def apply(m, v):
    return (m[0] * v[0] + m[1] * v[1], m[2] * v[0] + m[3] * v[1])


def invert(m):
    det = m[0] * m[3] - m[1] * m[2]
    return (m[3] / det, -m[1] / det, -m[2] / det, m[0] / det)


def segments_intersect(a0, a1, b0, b1, tol):
    """Return the parameters (s, t) of a closest contact between two segments
    if they come within ``tol`` of each other, else None.

    Collinear overlaps report the midpoint of the overlap.
    """
    da = sub(a1, a0)
    db = sub(b1, b0)
    la = norm(da)
    lb = norm(db)
    den = cross(da, db)
    if la == 0.0 or lb == 0.0:
        return None
    if abs(den) > 1e-12 * la * lb:
        w = sub(b0, a0)
        s = cross(w, db) / den
        t = cross(w, da) / den
        ta = tol / la
        tb = tol / lb
        if -ta <= s <= 1 + ta and -tb <= t <= 1 + tb:
            return (min(max(s, 0.0), 1.0), min(max(t, 0.0), 1.0))
        # near-misses at endpoints
    # parallel, or crossing point outside: check endpoint distances
    best = None
    for s, p in ((0.0, a0), (1.0, a1)):
        if segment_distance(p, b0, b1) <= tol:
            t = dot(sub(p, b0), db) / (lb * lb)
            cand = (s, min(max(t, 0.0), 1.0))
            best = cand if best is None else best
    for t, p in ((0.0, b0), (1.0, b1)):
        if segment_distance(p, a0, a1) <= tol:
            s = dot(sub(p, a0), da) / (la * la)
            cand = (min(max(s, 0.0), 1.0), t)
            best = cand if best is None else best
    if best is not None and abs(den) <= 1e-12 * la * lb:
        # collinear overlap: report the middle of the shared stretch
        s_vals = [min(max(dot(sub(p, a0), da) / (la * la), 0.0), 1.0) for p in (b0, b1)]
        s_mid = 0.5 * (max(min(s_vals), 0.0) + min(max(s_vals), 1.0))
        p = add(a0, scale(da, s_mid))
        t_mid = min(max(dot(sub(p, b0), db) / (lb * lb), 0.0), 1.0)
        return (s_mid, t_mid)
    return best
