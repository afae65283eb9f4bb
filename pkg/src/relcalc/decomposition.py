"""Canonical vertical decomposition of a finite union of closed convex cells.

The plane is cut by vertical lines at ``xs``.  Over each breakpoint we keep
the fibre (sorted disjoint closed intervals); over each open slab between
consecutive breakpoints we keep the fibre as sorted disjoint trapezoids
``(lo_slope, lo_icpt, hi_slope, hi_icpt)``.  Slabs are refined at every
crossing of two bounds, so the order of bounds is constant inside a slab,
and breakpoints across which nothing changes are removed.  The result is a
normal form: two cell unions are equal as point sets iff their
decompositions are equal tuples.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterable, List, Sequence

from .geometry import hull, slice_x, x_range
from .semilinear import Interval, normalize


@dataclass(frozen=True)
class Decomposition:
    xs: tuple
    fibers: tuple
    slabs: tuple

    @property
    def is_empty(self) -> bool:
        return not self.xs


EMPTY = Decomposition((), (), ())


def _merge_closed(ivs: Iterable) -> tuple:
    out: list = []
    for lo, hi in sorted(ivs):
        if out and lo <= out[-1][1]:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


def eval_traps(traps: Sequence, x) -> tuple:
    return _merge_closed((t[0] * x + t[1], t[2] * x + t[3]) for t in traps)


def _merge_traps(traps: Iterable, mid) -> tuple:
    """Union of trapezoids whose bounds never cross inside the slab."""
    keyed = sorted({(t[0] * mid + t[1], t[2] * mid + t[3], t) for t in traps})
    out: list = []
    cur_hi = None
    for lo, hi, t in keyed:
        if out and lo <= cur_hi:
            if hi > cur_hi:
                c = out[-1]
                out[-1] = (c[0], c[1], t[2], t[3])
                cur_hi = hi
        else:
            out.append(t)
            cur_hi = hi
    return tuple(out)


def _crossings(funcs: Iterable, a, b) -> list:
    fs = sorted(set(funcs))
    cuts = set()
    for i in range(len(fs)):
        m1, c1 = fs[i]
        for j in range(i + 1, len(fs)):
            m2, c2 = fs[j]
            if m1 != m2:
                x = (c2 - c1) / (m1 - m2)
                if a < x < b:
                    cuts.add(x)
    return sorted(cuts)


def _bounds(traps) -> list:
    out = []
    for t in traps:
        out.append((t[0], t[1]))
        out.append((t[2], t[3]))
    return out


def _compress(xs: list, fibers: list, slabs: list) -> Decomposition:
    keep = []
    for i, x in enumerate(xs):
        left = slabs[i - 1] if i > 0 else ()
        right = slabs[i] if i < len(slabs) else ()
        if left == right and fibers[i] == eval_traps(left, x):
            continue
        keep.append(i)
    return Decomposition(
        tuple(xs[i] for i in keep),
        tuple(fibers[i] for i in keep),
        tuple(slabs[i] for i in keep[:-1]),
    )


def _refine(xs: list, fibers: list, raw: list) -> Decomposition:
    """Split raw slabs at bound crossings, merge trapezoids and compress."""
    out_x, out_f, out_s = [], [], []
    for i, x in enumerate(xs):
        out_x.append(x)
        out_f.append(_merge_closed(fibers[i]))
        if i + 1 == len(xs):
            break
        a, b = x, xs[i + 1]
        traps = raw[i]
        if not traps:
            out_s.append(())
            continue
        cuts = _crossings(_bounds(traps), a, b)
        edges = [a] + cuts + [b]
        for j in range(len(edges) - 1):
            u, v = edges[j], edges[j + 1]
            out_s.append(_merge_traps(traps, (u + v) / 2))
            if j + 1 < len(edges) - 1:
                out_x.append(v)
                out_f.append(eval_traps(traps, v))
    return _compress(out_x, out_f, out_s)


def decompose(cells: Sequence) -> Decomposition:
    """Canonical decomposition of the union of ``cells``."""
    if not cells:
        return EMPTY
    xs = sorted({v[0] for c in cells for v in c})
    idx = {x: i for i, x in enumerate(xs)}
    fibers: List[list] = [[] for _ in xs]
    raw: List[list] = [[] for _ in range(len(xs) - 1)]
    for c in cells:
        x0, x1 = x_range(c)
        i0, i1 = idx[x0], idx[x1]
        prev = slice_x(c, xs[i0])
        fibers[i0].append(prev)
        for i in range(i0, i1):
            a, b = xs[i], xs[i + 1]
            nxt = slice_x(c, b)
            fibers[i + 1].append(nxt)
            w = b - a
            lm = (nxt[0] - prev[0]) / w
            hm = (nxt[1] - prev[1]) / w
            raw[i].append((lm, prev[0] - lm * a, hm, prev[1] - hm * a))
            prev = nxt
    return _refine(xs, fibers, raw)


def _trap_cell(t, a, b) -> tuple:
    return hull(((a, t[0] * a + t[1]), (a, t[2] * a + t[3]), (b, t[0] * b + t[1]), (b, t[2] * b + t[3])))


def to_cells(d: Decomposition) -> list:
    """A small cell list whose union is the decomposed set."""
    cells = []
    for i, traps in enumerate(d.slabs):
        a, b = d.xs[i], d.xs[i + 1]
        for t in traps:
            cells.append(_trap_cell(t, a, b))
    for i, x in enumerate(d.xs):
        limits = []
        if i > 0:
            limits += [(t[0] * x + t[1], t[2] * x + t[3]) for t in d.slabs[i - 1]]
        if i < len(d.slabs):
            limits += [(t[0] * x + t[1], t[2] * x + t[3]) for t in d.slabs[i]]
        for lo, hi in d.fibers[i]:
            if not any(l <= lo and hi <= h for l, h in limits):
                cells.append(hull(((x, lo), (x, hi))))
    return cells


def locate(d: Decomposition, x):
    """``("bp", i)`` at a breakpoint, ``("slab", i)`` inside a slab, else ``None``."""
    i = bisect_right(d.xs, x) - 1
    if i < 0:
        return None
    if d.xs[i] == x:
        return ("bp", i)
    if i + 1 < len(d.xs):
        return ("slab", i)
    return None


def fiber_at(d: Decomposition, x) -> tuple:
    loc = locate(d, x)
    if loc is None:
        return ()
    kind, i = loc
    return d.fibers[i] if kind == "bp" else eval_traps(d.slabs[i], x)


def slab_at(d: Decomposition, a, b) -> tuple:
    """Trapezoids over an open interval ``(a, b)`` lying inside one slab."""
    loc = locate(d, (a + b) / 2)
    if loc is None or loc[0] == "bp":
        return ()
    return d.slabs[loc[1]]


def image_parts(d: Decomposition, parts: Sequence[Interval]) -> tuple:
    """Flagged image of the set ``parts`` under the decomposed relation."""
    out = []
    for x, fib in zip(d.xs, d.fibers):
        if fib and any(p.contains(x) for p in parts):
            out.extend(Interval(lo, hi, True, True) for lo, hi in fib)
    for i, traps in enumerate(d.slabs):
        if not traps:
            continue
        slab = Interval(d.xs[i], d.xs[i + 1], False, False)
        for p in parts:
            if p.hi <= slab.lo:
                continue
            if p.lo >= slab.hi:
                break
            iv = p.intersect(slab)
            if iv.is_empty:
                continue
            for lm, lc, hm, hc in traps:
                if lm > 0:
                    ylo, lcl = lm * iv.lo + lc, iv.lo_closed
                elif lm < 0:
                    ylo, lcl = lm * iv.hi + lc, iv.hi_closed
                else:
                    ylo, lcl = lc, True
                if hm > 0:
                    yhi, hcl = hm * iv.hi + hc, iv.hi_closed
                elif hm < 0:
                    yhi, hcl = hm * iv.lo + hc, iv.lo_closed
                else:
                    yhi, hcl = hc, True
                out.append(Interval(ylo, yhi, lcl, hcl))
    return normalize(out)


def domain_parts(d: Decomposition) -> tuple:
    out = [Interval(x, x, True, True) for x, fib in zip(d.xs, d.fibers) if fib]
    out += [Interval(d.xs[i], d.xs[i + 1], False, False) for i, t in enumerate(d.slabs) if t]
    return normalize(out)


def singleton_pieces(d: Decomposition):
    """Where fibres are single points: ``(slab pieces, point pieces)``.

    Slab pieces are ``(a, b, slope, intercept)`` over the open interval
    ``(a, b)``; point pieces are ``(x, y)``.
    """
    slabs = []
    for i, traps in enumerate(d.slabs):
        if len(traps) == 1 and traps[0][0] == traps[0][2] and traps[0][1] == traps[0][3]:
            slabs.append((d.xs[i], d.xs[i + 1], traps[0][0], traps[0][1]))
    points = [(x, fib[0][0]) for x, fib in zip(d.xs, d.fibers) if len(fib) == 1 and fib[0][0] == fib[0][1]]
    return slabs, points


def _labelled_difference(a_traps, b_traps, m) -> list:
    """Closure of ``A(m) minus B(m)`` as pairs of bound functions."""
    pieces = []
    bs = [((t[0], t[1]), (t[2], t[3]), t[0] * m + t[1], t[2] * m + t[3]) for t in b_traps]
    for t in a_traps:
        lo_f, hi_f = (t[0], t[1]), (t[2], t[3])
        ahv = t[2] * m + t[3]
        cur_f, cur_v, cur_closed = lo_f, t[0] * m + t[1], True
        for bl_f, bh_f, blv, bhv in bs:
            if bhv < cur_v or blv > ahv:
                continue
            if blv > cur_v:
                pieces.append((cur_f, bl_f))
            if bhv > cur_v or (bhv == cur_v and cur_closed):
                cur_f, cur_v, cur_closed = bh_f, bhv, False
        if cur_v < ahv or (cur_v == ahv and cur_closed):
            pieces.append((cur_f, hi_f))
    return pieces


def _fiber_difference(fa, fb) -> list:
    out = []
    for lo, hi in fa:
        cur, closed = lo, True
        for blo, bhi in fb:
            if bhi < cur or blo > hi:
                continue
            if blo > cur:
                out.append((cur, blo))
            if bhi > cur or (bhi == cur and closed):
                cur, closed = bhi, False
        if cur < hi or (cur == hi and closed):
            out.append((cur, hi))
    return out


def closure_of_difference(da: Decomposition, db: Decomposition) -> list:
    """Cells whose union is the closure of ``A minus B``."""
    if da.is_empty:
        return []
    xs = sorted(set(da.xs) | {x for x in db.xs if da.xs[0] < x < da.xs[-1]})
    cells = []
    for i, x in enumerate(xs):
        for lo, hi in _fiber_difference(fiber_at(da, x), fiber_at(db, x)):
            cells.append(hull(((x, lo), (x, hi))))
        if i + 1 == len(xs):
            break
        a, b = x, xs[i + 1]
        ta, tb = slab_at(da, a, b), slab_at(db, a, b)
        if not ta:
            continue
        cuts = _crossings(_bounds(ta) + _bounds(tb), a, b)
        edges = [a] + cuts + [b]
        for j in range(len(edges) - 1):
            u, v = edges[j], edges[j + 1]
            if j > 0:
                for lo, hi in _fiber_difference(eval_traps(ta, u), eval_traps(tb, u)):
                    cells.append(hull(((u, lo), (u, hi))))
            for lo_f, hi_f in _labelled_difference(ta, tb, (u + v) / 2):
                cells.append(_trap_cell((lo_f[0], lo_f[1], hi_f[0], hi_f[1]), u, v))
    return cells
