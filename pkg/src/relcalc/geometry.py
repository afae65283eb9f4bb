"""Exact convex-cell geometry in the rational plane.

A cell is a tuple of vertices: one vertex is a point, two a segment, three
or more a strictly convex polygon listed counterclockwise starting from the
lexicographically smallest vertex.  ``hull`` produces this normal form.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence, Tuple

Point = Tuple[Fraction, Fraction]


def _cross(o, a, b) -> Fraction:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def hull(points: Iterable[Point]) -> tuple:
    """Convex hull in cell normal form (collinear vertices dropped)."""
    pts = sorted(set(points))
    if len(pts) <= 1:
        return tuple(pts)
    lower: list = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    ring = lower[:-1] + upper[:-1]
    if len(ring) == 2 or (len(ring) > 2 and all(_cross(ring[0], ring[1], r) == 0 for r in ring[2:])):
        return (pts[0], pts[-1])
    return tuple(ring)


def x_range(cell) -> Tuple[Fraction, Fraction]:
    xs = [v[0] for v in cell]
    return min(xs), max(xs)


def y_range(cell) -> Tuple[Fraction, Fraction]:
    ys = [v[1] for v in cell]
    return min(ys), max(ys)


def swap(cell) -> tuple:
    return hull((v[1], v[0]) for v in cell)


def slice_x(cell, x) -> Optional[Tuple[Fraction, Fraction]]:
    """The y-extent of ``cell`` on the vertical line through ``x``."""
    n = len(cell)
    ys = []
    for i in range(n):
        p = cell[i]
        q = cell[(i + 1) % n]
        if p[0] == x:
            ys.append(p[1])
        elif (p[0] - x) * (q[0] - x) < 0:
            t = (x - p[0]) / (q[0] - p[0])
            ys.append(p[1] + t * (q[1] - p[1]))
    if not ys:
        return None
    return min(ys), max(ys)


def slice_y(cell, y) -> Optional[Tuple[Fraction, Fraction]]:
    """The x-extent of ``cell`` on the horizontal line through ``y``."""
    n = len(cell)
    xs = []
    for i in range(n):
        p = cell[i]
        q = cell[(i + 1) % n]
        if p[1] == y:
            xs.append(p[0])
        elif (p[1] - y) * (q[1] - y) < 0:
            t = (y - p[1]) / (q[1] - p[1])
            xs.append(p[0] + t * (q[0] - p[0]))
    if not xs:
        return None
    return min(xs), max(xs)


def clip_halfplane(cell, a, b, c) -> tuple:
    """Intersect with ``{a*x + b*y <= c}``; returns ``()`` when empty."""
    n = len(cell)
    vals = [a * v[0] + b * v[1] - c for v in cell]
    if all(s <= 0 for s in vals):
        return tuple(cell)
    if all(s > 0 for s in vals):
        return ()
    out = []
    for i in range(n):
        p, q = cell[i], cell[(i + 1) % n]
        sp, sq = vals[i], vals[(i + 1) % n]
        if sp <= 0:
            out.append(p)
        if (sp < 0 < sq) or (sq < 0 < sp):
            t = sp / (sp - sq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return hull(out)


def clip_box(cell, x0, x1, y0, y1) -> tuple:
    """Intersect with the closed box ``[x0,x1] x [y0,y1]``."""
    c = cell
    for a, b, k in ((1, 0, x1), (-1, 0, -x0), (0, 1, y1), (0, -1, -y0)):
        c = clip_halfplane(c, a, b, k)
        if not c:
            return ()
    return c


def compose_cells(a, b) -> tuple:
    """``{(x, z) : (x, y) in a and (y, z) in b for some y}``; ``()`` when empty.

    Within each band between consecutive breakpoints every slice bound is
    affine in ``y``, so the three-dimensional fibre product is the hull of the
    rectangles at the breakpoints, and so is its projection.
    """
    ay0, ay1 = y_range(a)
    by0, by1 = x_range(b)
    lo = max(ay0, by0)
    hi = min(ay1, by1)
    if lo > hi:
        return ()
    ys = {lo, hi}
    ys.update(v[1] for v in a if lo < v[1] < hi)
    ys.update(v[0] for v in b if lo < v[0] < hi)
    corners = []
    for y in ys:
        sa = slice_y(a, y)
        sb = slice_x(b, y)
        if sa is None or sb is None:
            continue
        for x in sa:
            for z in sb:
                corners.append((x, z))
    return hull(corners)


def contains_point(cell, p: Point) -> bool:
    s = slice_x(cell, p[0])
    return s is not None and s[0] <= p[1] <= s[1]


def kind(cell: Sequence) -> str:
    return {1: "point", 2: "segment"}.get(len(cell), "polygon")
