"""Independent brute-force re-implementations used as test oracles.

Plain Python loops only; nothing here calls into mixtrace.
"""
import math


def cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def gift_wrap(points):
    """Jarvis march. Returns the strictly convex hull vertices, CCW."""
    pts = sorted(set(map(tuple, points)))
    if len(pts) < 3:
        return pts
    start = pts[0]
    hull = []
    p = start
    while True:
        hull.append(p)
        q = pts[0] if pts[0] != p else pts[1]
        for r in pts:
            if r == p:
                continue
            c = cross(p, q, r)
            # r is clockwise of p->q, or collinear and farther away
            if c < 0 or (c == 0 and math.dist(p, r) > math.dist(p, q)):
                q = r
        p = q
        if p == start:
            break
        if len(hull) > len(pts):
            raise RuntimeError("gift wrapping did not close")
    if len(hull) >= 3 and all(cross(hull[0], hull[1], h) == 0 for h in hull[2:]):
        return [hull[0], max(hull, key=lambda h: math.dist(hull[0], h))]
    return hull


def fan_area(vertices):
    """Area by triangulating from the vertex centroid."""
    if len(vertices) < 3:
        return 0.0
    cx = sum(v[0] for v in vertices) / len(vertices)
    cy = sum(v[1] for v in vertices) / len(vertices)
    c = (cx, cy)
    total = 0.0
    for i in range(len(vertices)):
        a, b = vertices[i], vertices[(i + 1) % len(vertices)]
        total += abs(cross(c, a, b)) / 2.0
    return total


def seg_dist(p, a, b):
    ax, ay = b[0] - a[0], b[1] - a[1]
    L2 = ax * ax + ay * ay
    if L2 == 0:
        return math.dist(p, a)
    t = max(0.0, min(1.0, ((p[0] - a[0]) * ax + (p[1] - a[1]) * ay) / L2))
    return math.dist(p, (a[0] + t * ax, a[1] + t * ay))


def inside_halfplanes(vertices, p, tol=1e-9):
    """Closed-polygon membership by half-plane tests; degenerate hulls by distance."""
    if len(vertices) == 1:
        return math.dist(p, vertices[0]) <= tol
    if len(vertices) == 2:
        return seg_dist(p, vertices[0], vertices[1]) <= tol
    if all(cross(vertices[i], vertices[(i + 1) % len(vertices)], p) >= 0
           for i in range(len(vertices))):
        return True
    return min(seg_dist(p, vertices[i], vertices[(i + 1) % len(vertices)])
               for i in range(len(vertices))) <= tol


def min_sq(p, sources):
    return min((p[0] - s[0]) ** 2 + (p[1] - s[1]) ** 2 for s in sources)


def pair_count(sources, r):
    n = 0
    for i in range(len(sources)):
        for j in range(i + 1, len(sources)):
            if math.dist(sources[i], sources[j]) < r:
                n += 1
    return n


def statistics(sources, data, r):
    """(g, sum_alpha, n_e, n, n_r) computed by brute force."""
    sources = [tuple(s) for s in sources]
    data = [tuple(d) for d in data]
    hs = gift_wrap(sources)
    g = abs(fan_area(hs) - fan_area(gift_wrap(data)))
    sum_alpha = sum(min_sq(d, sources) for d in data)
    n_e = sum(1 for d in data if inside_halfplanes(hs, d))
    return g, sum_alpha, n_e, len(sources), pair_count(sources, r)


def energy_total(sources, data, theta, r):
    g, sa, ne, n, nr = statistics(sources, data, r)
    t1, t2, t3, t4, t5 = theta
    return t1 * g + t2 * sa + t3 * ne + t4 * n + t5 * nr
